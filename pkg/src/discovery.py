"""Resolve command line paths into subject files and load them"""
import ast
import os
import shlex
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple, Union

import psutil

from src.errors import NonexistentPath, SourceLoadError

DEFAULT_INTERPRETER = "python3"


@dataclass
class RunConfig:
    paths: List[str] = field(default_factory=lambda: ["."])
    group_tags: List[str] = field(default_factory=list)
    order_tags: List[str] = field(default_factory=list)
    name_filter: Optional[str] = None
    parallelism: Union[int, str] = 1
    ignore_import_errors: bool = False
    default_timeout: Optional[float] = None
    interpreter_command: List[str] = field(
        default_factory=lambda: [DEFAULT_INTERPRETER])
    report_path: Optional[str] = None
    list_only: bool = False
    verbosity: int = 0
    keep_programs: Optional[str] = None

    def __post_init__(self):
        self.parallelism = resolve_parallelism(self.parallelism)
        # first occurrence wins
        self.order_tags = list(dict.fromkeys(self.order_tags))
        if isinstance(self.interpreter_command, str):
            self.interpreter_command = shlex.split(self.interpreter_command)

    def to_dict(self) -> dict:
        """Options that decide the outcome of a run, worker count excluded"""
        return {
            "paths": list(self.paths),
            "group_tags": list(self.group_tags),
            "order_tags": list(self.order_tags),
            "name_filter": self.name_filter,
            "ignore_import_errors": self.ignore_import_errors,
            "default_timeout": self.default_timeout,
            "interpreter_command": list(self.interpreter_command),
            "list_only": self.list_only,
        }


@dataclass
class SourceFile:
    path: str
    text: str
    syntax_tree: ast.Module

    @property
    def lines(self) -> List[str]:
        return self.text.splitlines(keepends=True)


def resolve_parallelism(value: Union[int, str]) -> int:
    """Resolve "auto" to the logical CPU count, otherwise require a positive int"""
    if value == "auto":
        return max(1, psutil.cpu_count(logical=True) or os.cpu_count() or 1)
    value = int(value)
    if value < 1:
        raise ValueError(f"parallelism must be >= 1, got {value}")
    return value


def resolve_paths(config: RunConfig) -> List[str]:
    """Expand the configured paths into the sorted set of files to scan

    Directories are walked recursively for ``.py`` files, skipping hidden
    directories and following each symlinked directory at most once.
    Files named explicitly are kept whatever their extension.

    Args:
        config (RunConfig): run configuration, only ``paths`` is used

    Raises:
        NonexistentPath: an argument does not exist

    Returns:
        List[str]: normalized file paths, sorted and de-duplicated
    """
    for path in config.paths:
        if not os.path.exists(path):
            raise NonexistentPath(path)

    found = set()
    for path in config.paths:
        if os.path.isdir(path):
            found.update(_walk_python_files(path))
        else:
            found.add(os.path.normpath(path))
    return sorted(found)


def _walk_python_files(root: str) -> Iterable[str]:
    seen_dirs = set()
    for dirpath, dirnames, filenames in os.walk(root, followlinks=True):
        real = os.path.realpath(dirpath)
        if real in seen_dirs:
            # symlink cycle or a directory reached twice
            dirnames[:] = []
            continue
        seen_dirs.add(real)
        dirnames[:] = sorted(d for d in dirnames if not d.startswith("."))
        for filename in filenames:
            if filename.endswith(".py"):
                yield os.path.normpath(os.path.join(dirpath, filename))


def load_source(path: str) -> SourceFile:
    """Read and parse one subject file

    Raises:
        SourceLoadError: DECODE_ERROR if the file is not UTF-8,
            SYNTAX_ERROR if it does not parse
    """
    with open(path, "rb") as f:
        raw = f.read()
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise SourceLoadError(f"not valid UTF-8: {e.reason} at byte {e.start}",
                              path=path, reason="DECODE_ERROR")
    try:
        tree = ast.parse(text, filename=path)
    except SyntaxError as e:
        raise SourceLoadError(f"{e.msg}", path=path, line=e.lineno, reason="SYNTAX_ERROR")
    except ValueError as e:  # e.g. source contains null bytes
        raise SourceLoadError(str(e), path=path, reason="SYNTAX_ERROR")
    return SourceFile(path=path, text=text, syntax_tree=tree)


def load_sources(paths: List[str], workers: int = 1) -> Tuple[List[SourceFile], List[SourceLoadError]]:
    """Load many files concurrently, results keep the order of ``paths``"""

    def _load(path):
        try:
            return load_source(path)
        except SourceLoadError as e:
            return e
        except OSError as e:
            return SourceLoadError(f"cannot read file: {e.strerror}", path=path,
                                   reason="READ_ERROR")

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        loaded = list(pool.map(_load, paths))

    sources = [item for item in loaded if isinstance(item, SourceFile)]
    errors = [item for item in loaded if isinstance(item, SourceLoadError)]
    return sources, errors
