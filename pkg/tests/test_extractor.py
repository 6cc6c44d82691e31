import ast
import os
import unittest

import pytest

from src.discovery import SourceFile, load_source
from src.errors import MalformedError, NoTargetError, UnsupportedTargetError
from src.extractor import Assignment, Check, extract_declaration, validate_parameterization
from src.finder import find_inline_tests

CORPUS = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")


def declarations(source):
    return [extract_declaration(raw, source) for raw in find_inline_tests(source)]


def only_declaration(source):
    found = find_inline_tests(source)
    assert len(found) == 1
    return extract_declaration(found[0], source)


class ExtractDeclarationTestCase(unittest.TestCase):

    def test_display_name_example(self):
        decl = only_declaration(load_source(os.path.join(CORPUS, "features", "display_name.py")))
        self.assertEqual(decl.test_name, "check_match_name")
        self.assertEqual(decl.assignments, [Assignment("name", '"a:0"')])
        self.assertEqual(decl.checks, [Check("eq", "m.group(1)", '"a"')])
        self.assertEqual(decl.target.location.line, 7)
        self.assertEqual(decl.target.free_names, frozenset({"re", "name"}))
        self.assertEqual(decl.target.bound_names, frozenset({"m"}))
        self.assertFalse(decl.target.top_level)

    def test_consecutive_tests_share_target(self):
        decls = declarations(load_source(os.path.join(CORPUS, "features", "oracles.py")))
        self.assertEqual(len(decls), 8)
        self.assertEqual({d.target.location for d in decls}, {decls[0].target.location})
        self.assertEqual([d.checks[0].kind for d in decls],
                         ["eq", "neq", "true", "false", "none", "not_none", "same", "not_same"])

    def test_no_target(self):
        source = load_source(os.path.join(CORPUS, "malformed", "no_target.py"))
        with self.assertRaises(NoTargetError) as ctx:
            only_declaration(source)
        self.assertEqual(ctx.exception.line, 5)

    def test_return_is_not_a_target(self):
        source = load_source(os.path.join(CORPUS, "malformed", "unsupported_target.py"))
        with self.assertRaises(UnsupportedTargetError):
            only_declaration(source)

    def test_top_level_target(self):
        decl = only_declaration(load_source(os.path.join(CORPUS, "features", "helpers.py")))
        self.assertTrue(decl.target.top_level)
        self.assertEqual(decl.target.statement_text, "value = f(3.7)")
        self.assertEqual(decl.target.free_names, frozenset({"f"}))


MALFORMED = [
    ("unknown_method.py", "UNKNOWN_METHOD"),
    ("no_check.py", "NO_CHECK"),
    ("bad_arity.py", "BAD_ARITY"),
    ("bad_constructor_arg.py", "BAD_CONSTRUCTOR_ARG"),
    ("given_after_check.py", "GIVEN_AFTER_CHECK"),
    ("non_identifier_given_target.py", "NON_IDENTIFIER_GIVEN_TARGET"),
    ("duplicate_given.py", "DUPLICATE_GIVEN"),
    ("not_a_statement.py", "NOT_A_STATEMENT"),
    ("assume_after_check.py", "ASSUME_AFTER_CHECK"),
    ("param_length_mismatch.py", "PARAM_LENGTH_MISMATCH"),
    ("param_not_list.py", "PARAM_NOT_LIST"),
]


@pytest.mark.parametrize("filename, reason", MALFORMED)
def test_malformed_reason(filename, reason):
    path = os.path.join(CORPUS, "malformed", filename)
    source = load_source(path)
    with pytest.raises(MalformedError) as info:
        validate_parameterization(only_declaration(source))
    assert info.value.reason == reason
    assert info.value.path == path
    assert info.value.line == 8


@pytest.mark.parametrize("chain, reason", [
    ("itest(test_name=NAME).check_true(x)", "BAD_CONSTRUCTOR_ARG"),
    ("itest(repeated=0).check_true(x)", "BAD_CONSTRUCTOR_ARG"),
    ("itest(repeated=True).check_true(x)", "BAD_CONSTRUCTOR_ARG"),
    ("itest(timeout=-1).check_true(x)", "BAD_CONSTRUCTOR_ARG"),
    ("itest(tag='str').check_true(x)", "BAD_CONSTRUCTOR_ARG"),
    ("itest(**options).check_true(x)", "BAD_CONSTRUCTOR_ARG"),
    ("itest('a', False, 1, [], False, 1, 'extra').check_true(x)", "BAD_ARITY"),
    ("itest().check_true(x, y)", "BAD_ARITY"),
    ("itest().check_eq(x)", "BAD_ARITY"),
    ("itest().check_eq(actual=x, expected=1)", "BAD_ARITY"),
    ("itest().assume().check_true(x)", "BAD_ARITY"),
    ("itest().given(x, 1).skip().check_true(x)", "UNKNOWN_METHOD"),
    ("itest().check_true(x).passed", "UNKNOWN_METHOD"),
])
def test_malformed_chains(make_source, chain, reason):
    source = make_source(f"""
        from inline import itest
        x = 1
        {chain}
    """)
    with pytest.raises(MalformedError) as info:
        only_declaration(source)
    assert info.value.reason == reason
    assert info.value.line == 3


def test_timeout_without_given(make_source):
    decl = only_declaration(make_source("""
        from inline import itest
        x = compute()
        itest(timeout=5).check_true(x)
    """))
    assert decl.timeout == 5
    assert decl.assignments == []
    assert decl.checks == [Check("true", "x")]


def test_positional_constructor_arguments(make_source):
    decl = only_declaration(make_source("""
        from inline import itest
        x = 1
        itest("short", False, 3, ["fast"]).check_eq(x, 1)
    """))
    assert (decl.test_name, decl.parameterized, decl.repeated, decl.tags) == ("short", False, 3, ["fast"])


def test_given_unused_by_target_warns(make_source, capsys):
    decl = only_declaration(make_source("""
        from inline import itest
        x = 1
        itest().given(y, 2).check_eq(x, 1)
    """))
    assert len(decl.warnings) == 1
    assert "'y'" in decl.warnings[0]
    assert "[WARNING]:" in capsys.readouterr().err


def test_read_modify_write_names_are_free(make_source):
    decl = only_declaration(make_source("""
        from inline import itest
        count = 0
        count += 1
        itest().check_eq(count, 1)
    """))
    assert "count" in decl.target.free_names
    assert "count" in decl.target.bound_names


def test_parameter_count(make_source):
    decls = declarations(make_source("""
        import re
        from inline import itest
        def split_name(name):
            m = re.match(r"^(.+):\\d+$", name)
            itest(parameterized=True).given(name, ["a:0", "a:1:1"]).check_eq(m.group(1), ["a", "a:1"])
            itest(parameterized=True).given(name, ["a:0", "b:0", "c:0"]).check_true(m)
            itest().given(name, "a:0").check_eq(m.group(1), "a")
    """))
    assert [validate_parameterization(d) for d in decls] == [2, 3, 1]


def test_assume_and_given_order_is_free(make_source):
    decl = only_declaration(make_source("""
        import platform
        from inline import itest
        def f(name):
            m = name.upper()
            itest().given(name, "a").assume(platform.system() != "").check_eq(m, "A")
    """))
    assert decl.assumptions == ['platform.system() != ""']
    assert decl.assignments == [Assignment("name", '"a"')]


@pytest.mark.parametrize("filename", ["display_name.py", "parameterized.py", "tags.py", "assumption.py"])
def test_reserialized_chain_extracts_to_equal_declaration(filename):
    original = load_source(os.path.join(CORPUS, "features", filename))
    lines = original.text.splitlines(keepends=True)
    for decl in declarations(original):
        line = lines[decl.location.line - 1]
        indent = line[:len(line) - len(line.lstrip())]
        rewritten = lines[:decl.location.line - 1] + [indent + decl.to_source() + "\n"] + lines[decl.location.line:]
        text = "".join(rewritten)
        source = SourceFile(original.path, text, ast.parse(text))
        again = [d for d in declarations(source) if d.location.line == decl.location.line][0]
        for name in ("test_name", "parameterized", "repeated", "tags", "disabled", "timeout",
                     "assumptions", "assignments", "checks", "target"):
            assert getattr(again, name) == getattr(decl, name), name
