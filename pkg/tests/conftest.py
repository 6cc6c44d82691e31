import ast
import os
import sys
import textwrap

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

CORPUS = os.path.join(ROOT, "tests", "corpus")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: end-to-end checks that take many seconds")


@pytest.fixture
def make_source():
    """SourceFile from an indented code snippet, no file on disk"""
    from src.discovery import SourceFile

    def _make(code, path="subject.py"):
        text = textwrap.dedent(code).lstrip("\n")
        return SourceFile(path=path, text=text, syntax_tree=ast.parse(text))

    return _make


@pytest.fixture
def corpus_path():
    def _path(*parts):
        return os.path.join(CORPUS, *parts)

    return _path
