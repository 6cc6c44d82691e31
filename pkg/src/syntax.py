"""Source slicing and name analysis shared by the extractor and the assembler"""
import ast
import builtins
import copy
import symtable
import textwrap
from typing import Set, Tuple

from src.finder import char_column, is_inline_test_statement

MODULE_DUNDERS = {
    "__name__", "__file__", "__doc__", "__builtins__", "__spec__",
    "__loader__", "__package__", "__annotations__",
}
BUILTIN_NAMES = frozenset(dir(builtins)) | MODULE_DUNDERS


def same_tree(a: ast.AST, b: ast.AST) -> bool:
    return ast.dump(a) == ast.dump(b)


def _statement_start(node: ast.stmt) -> Tuple[int, bool]:
    decorators = getattr(node, "decorator_list", None) or []
    if decorators:
        return min(d.lineno for d in decorators), True
    return node.lineno, False


def statement_text(text: str, node: ast.stmt) -> str:
    """Source of one statement (decorators included) dedented to column 0

    Falls back to ``ast.unparse`` when dedenting would change the meaning,
    e.g. a multi-line string literal whose lines are less indented.
    """
    lines = text.splitlines()
    start, decorated = _statement_start(node)
    chunk = lines[start - 1:node.end_lineno]
    if not chunk:
        return ast.unparse(node)
    last = chunk[-1]
    chunk[-1] = last[:char_column(last, node.end_col_offset)]
    first = chunk[0]
    if decorated:
        column = len(first) - len(first.lstrip())
    else:
        column = char_column(first, node.col_offset)
    chunk[0] = " " * column + first[column:]
    candidate = textwrap.dedent("\n".join(chunk)).strip("\n")
    try:
        parsed = ast.parse(candidate)
    except SyntaxError:
        return ast.unparse(node)
    if len(parsed.body) == 1 and same_tree(parsed.body[0], node):
        return candidate
    return ast.unparse(node)


def expression_text(text: str, node: ast.expr) -> str:
    """Source of an expression, verbatim when it re-parses to the same tree"""
    segment = ast.get_source_segment(text, node)
    if segment is not None:
        try:
            parsed = ast.parse(f"({segment})", mode="eval")
        except SyntaxError:
            parsed = None
        if parsed is not None and same_tree(parsed.body, node):
            return segment
    return ast.unparse(node)


def names_of(code: str) -> Tuple[Set[str], Set[str]]:
    """Module-level names a piece of code reads and binds

    Reads include globals referenced from nested functions and classes.

    Args:
        code (str): module source

    Raises:
        SyntaxError: code is not a valid module

    Returns:
        Tuple[Set[str], Set[str]]: (read names, bound names)
    """
    table = symtable.symtable(code, "<itest>", "exec")
    reads, bound = set(), set()
    for sym in table.get_symbols():
        if sym.is_referenced():
            reads.add(sym.get_name())
        if sym.is_assigned() or sym.is_imported() or sym.is_namespace():
            bound.add(sym.get_name())

    stack = list(table.get_children())
    while stack:
        child = stack.pop()
        for sym in child.get_symbols():
            if not (sym.is_global() or sym.is_declared_global()):
                continue
            if sym.is_referenced():
                reads.add(sym.get_name())
            if sym.is_declared_global() and sym.is_assigned():
                bound.add(sym.get_name())
        stack.extend(child.get_children())
    return reads, bound


class _EvaluationOrder(ast.NodeVisitor):
    """First access (load or store) of each name in the statement's own scope

    Nested function and class bodies, lambdas and comprehensions are not
    entered beyond the parts evaluated in the enclosing scope.
    """

    def __init__(self):
        self.first = {}

    def record(self, name, kind):
        self.first.setdefault(name, kind)

    def visit_all(self, nodes):
        for node in nodes:
            if node is not None:
                self.visit(node)

    def visit_Name(self, node):
        self.record(node.id, "store" if isinstance(node.ctx, ast.Store) else "load")

    def visit_Assign(self, node):
        self.visit(node.value)
        self.visit_all(node.targets)

    def visit_AugAssign(self, node):
        if isinstance(node.target, ast.Name):
            self.record(node.target.id, "load")
        self.visit(node.value)
        self.visit(node.target)

    def visit_AnnAssign(self, node):
        self.visit_all([node.annotation, node.value, node.target])

    def visit_NamedExpr(self, node):
        self.visit(node.value)
        self.visit(node.target)

    def visit_For(self, node):
        self.visit(node.iter)
        self.visit(node.target)
        self.visit_all(node.body + node.orelse)

    visit_AsyncFor = visit_For

    def _definition(self, node, arguments=None):
        self.visit_all(getattr(node, "decorator_list", []))
        if arguments is not None:
            self.visit_all(arguments.defaults + arguments.kw_defaults)

    def visit_FunctionDef(self, node):
        self._definition(node, node.args)
        self.record(node.name, "store")

    visit_AsyncFunctionDef = visit_FunctionDef

    def visit_ClassDef(self, node):
        self._definition(node)
        self.visit_all(node.bases + [k.value for k in node.keywords])
        self.record(node.name, "store")

    def visit_Lambda(self, node):
        self._definition(node, node.args)

    def _comprehension(self, node):
        self.visit(node.generators[0].iter)

    visit_ListComp = visit_SetComp = visit_DictComp = visit_GeneratorExp = _comprehension

    def visit_Import(self, node):
        for alias in node.names:
            self.record(alias.asname or alias.name.split(".")[0], "store")

    visit_ImportFrom = visit_Import

    def visit_ExceptHandler(self, node):
        self.visit_all([node.type])
        if node.name:
            self.record(node.name, "store")
        self.visit_all(node.body)

    def _capture(self, node):
        self.generic_visit(node)
        for field in ("name", "rest"):
            name = getattr(node, field, None)
            if isinstance(name, str):
                self.record(name, "store")

    visit_MatchAs = visit_MatchStar = visit_MatchMapping = _capture


def loads_before_stores(node: ast.AST) -> Set[str]:
    """Names whose first access in evaluation order is a read"""
    order = _EvaluationOrder()
    order.visit(node)
    return {name for name, kind in order.first.items() if kind == "load"}


def expression_reads(expression: str) -> Set[str]:
    reads, _ = names_of(f"({expression})\n")
    return reads


def contains_inline_tests(node: ast.AST) -> bool:
    return any(isinstance(sub, ast.stmt) and is_inline_test_statement(sub)
               for sub in ast.walk(node))


class _InlineTestStripper(ast.NodeTransformer):

    def generic_visit(self, node):
        super().generic_visit(node)
        for name, value in ast.iter_fields(node):
            if isinstance(value, list) and value and isinstance(value[0], ast.stmt):
                kept = [stmt for stmt in value if not is_inline_test_statement(stmt)]
                if not kept and name in ("body", "finalbody"):
                    kept = [ast.Pass()]
                setattr(node, name, kept)
        return node


def strip_inline_tests(text: str, node: ast.stmt) -> str:
    """Statement source with every nested inline test removed"""
    if not contains_inline_tests(node):
        return statement_text(text, node)
    stripped = _InlineTestStripper().visit(copy.deepcopy(node))
    return ast.unparse(ast.fix_missing_locations(stripped))


def indent_block(code: str, prefix: str = "    ") -> str:
    """Indent ``code`` one level, unparsing it first if indenting alters it"""
    indented = textwrap.indent(code, prefix)
    try:
        original = ast.parse(code)
        wrapped = ast.parse("if True:\n" + indented)
    except SyntaxError:
        return indented
    if same_tree(ast.Module(body=wrapped.body[0].body, type_ignores=[]), original):
        return indented
    return textwrap.indent(ast.unparse(original), prefix)
