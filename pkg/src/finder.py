"""Locate inline test statements in a parsed source file"""
import ast
from dataclasses import dataclass
from typing import Iterator, List, Optional

from src.discovery import SourceFile

CONSTRUCTOR = "itest"

# statement containers that are not statements themselves
_CLAUSES = tuple(getattr(ast, name) for name in ("excepthandler", "match_case") if hasattr(ast, name))


@dataclass(frozen=True)
class Location:
    path: str
    line: int
    column: int  # 0-based, in characters

    def __str__(self) -> str:
        return f"{self.path}:{self.line}"


@dataclass(eq=False)
class RawInlineTest:
    """An inline test as found in the tree, not validated yet

    ``embedded`` is set when the ``itest()`` call sits inside another
    statement instead of forming its own expression statement; the
    extractor rejects those as NOT_A_STATEMENT.
    """
    statement_ref: ast.stmt
    location: Location
    enclosing_block: List[ast.stmt]
    index_in_block: int
    embedded: bool = False
    call_ref: Optional[ast.Call] = None


def chain_root(node: ast.AST) -> Optional[ast.Call]:
    """Leftmost call of a method chain ``f(...).a(...).b(...)``"""
    while True:
        if isinstance(node, ast.Call):
            if isinstance(node.func, ast.Name):
                return node
            node = node.func
        elif isinstance(node, (ast.Attribute, ast.Subscript)):
            node = node.value
        else:
            return None


def is_constructor_call(node: ast.AST) -> bool:
    return (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id == CONSTRUCTOR)


def is_inline_test_statement(stmt: ast.stmt) -> bool:
    if not isinstance(stmt, ast.Expr):
        return False
    root = chain_root(stmt.value)
    return root is not None and is_constructor_call(root)


def has_marker_import(tree: ast.Module) -> bool:
    """True if some import binds the bare name ``itest``"""
    for node in ast.walk(tree):
        if isinstance(node, (ast.Import, ast.ImportFrom)):
            for alias in node.names:
                if alias.name == CONSTRUCTOR and alias.asname in (None, CONSTRUCTOR):
                    return True
    return False


def char_column(line_text: str, byte_offset: int) -> int:
    """ast column offsets count UTF-8 bytes, convert to characters"""
    return len(line_text.encode("utf-8")[:byte_offset].decode("utf-8", errors="ignore"))


class _Finder:

    def __init__(self, source: SourceFile) -> None:
        self.source = source
        self.lines = source.text.splitlines()
        self.found: List[RawInlineTest] = []

    def location(self, node: ast.AST) -> Location:
        line_text = self.lines[node.lineno - 1] if node.lineno <= len(self.lines) else ""
        return Location(self.source.path, node.lineno, char_column(line_text, node.col_offset))

    def visit_blocks(self, node: ast.AST) -> None:
        for _, value in ast.iter_fields(node):
            if not isinstance(value, list) or not value:
                continue
            if isinstance(value[0], ast.stmt):
                self.scan_block(value)
            else:
                for item in value:
                    if isinstance(item, _CLAUSES):
                        self.visit_blocks(item)

    def scan_block(self, block: List[ast.stmt]) -> None:
        for index, stmt in enumerate(block):
            if is_inline_test_statement(stmt):
                self.found.append(RawInlineTest(
                    statement_ref=stmt, location=self.location(stmt),
                    enclosing_block=block, index_in_block=index))
                continue
            call = next(self.embedded_calls(stmt), None)
            if call is not None:
                self.found.append(RawInlineTest(
                    statement_ref=stmt, location=self.location(call),
                    enclosing_block=block, index_in_block=index,
                    embedded=True, call_ref=call))
            self.visit_blocks(stmt)

    def embedded_calls(self, node: ast.AST) -> Iterator[ast.Call]:
        # expressions owned by this statement, nested statements are scanned as blocks
        for child in ast.iter_child_nodes(node):
            if isinstance(child, ast.stmt):
                continue
            if isinstance(child, _CLAUSES):
                yield from self.embedded_calls(child)
                continue
            for sub in ast.walk(child):
                if is_constructor_call(sub):
                    yield sub


def find_inline_tests(source: SourceFile) -> List[RawInlineTest]:
    """Every inline test statement of the file, in source order

    Files that never import ``itest`` are not scanned at all.
    """
    tree = source.syntax_tree
    if not has_marker_import(tree):
        return []
    finder = _Finder(source)
    finder.scan_block(tree.body)
    return sorted(finder.found, key=lambda raw: (raw.location.line, raw.location.column))
