"""Validate inline tests and bind them to their target statements

An inline test is a fluent chain::

    itest(test_name="check_match_name").assume(cond).given(name, "a:0").check_eq(m.group(1), "a")

Everything here is syntactic, no subject code is executed.
"""
import ast
import sys
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

from src.discovery import SourceFile
from src.errors import MalformedError, NoTargetError, UnsupportedTargetError
from src.finder import Location, RawInlineTest, char_column, is_inline_test_statement
from src.syntax import expression_text, loads_before_stores, names_of, strip_inline_tests

UNARY_CHECKS = ("true", "false", "none", "not_none")
BINARY_CHECKS = ("eq", "neq", "same", "not_same")
CHECK_KINDS = BINARY_CHECKS + UNARY_CHECKS

# constructor keywords in positional order
CONSTRUCTOR_ARGS = ("test_name", "parameterized", "repeated", "tag", "disabled", "timeout")


class Assignment(NamedTuple):
    name: str
    value: str
    # element sources when the value is a list literal
    items: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class Check:
    kind: str
    actual_expr: str
    expected_expr: Optional[str] = None
    actual_items: Optional[Tuple[str, ...]] = None
    expected_items: Optional[Tuple[str, ...]] = None

    @property
    def is_binary(self) -> bool:
        return self.kind in BINARY_CHECKS

    @property
    def source_text(self) -> str:
        args = [self.actual_expr]
        if self.expected_expr is not None:
            args.append(self.expected_expr)
        return f"check_{self.kind}({', '.join(args)})"


@dataclass(frozen=True)
class TargetStatement:
    statement_text: str
    location: Location
    free_names: FrozenSet[str]
    bound_names: FrozenSet[str]
    # index of the top-level statement that is, or contains, the target
    module_index: Optional[int] = None
    top_level: bool = False
    # running the module_index statement also runs the target (no function body in between)
    runs_with_enclosing: bool = False


@dataclass
class InlineTestDecl:
    location: Location
    target: TargetStatement
    checks: List[Check]
    test_name: Optional[str] = None
    parameterized: bool = False
    repeated: int = 1
    tags: List[str] = field(default_factory=list)
    disabled: bool = False
    timeout: Optional[float] = None
    assumptions: List[str] = field(default_factory=list)
    assignments: List[Assignment] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def to_source(self) -> str:
        """Re-serialize the declaration as an API chain"""
        options = []
        if self.test_name is not None:
            options.append(f"test_name={self.test_name!r}")
        if self.parameterized:
            options.append("parameterized=True")
        if self.repeated != 1:
            options.append(f"repeated={self.repeated!r}")
        if self.tags:
            options.append(f"tag={list(self.tags)!r}")
        if self.disabled:
            options.append("disabled=True")
        if self.timeout is not None:
            options.append(f"timeout={self.timeout!r}")
        chain = f"itest({', '.join(options)})"
        for expr in self.assumptions:
            chain += f".assume({expr})"
        for assignment in self.assignments:
            chain += f".given({assignment.name}, {assignment.value})"
        for check in self.checks:
            chain += "." + check.source_text
        return chain


_UNSUPPORTED_TARGETS = (ast.Return, ast.Break, ast.Continue)


_FUNCTION_BODIES = (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda)


def _path_to(root: ast.AST, node: ast.AST) -> Optional[List[ast.AST]]:
    if root is node:
        return [root]
    for child in ast.iter_child_nodes(root):
        path = _path_to(child, node)
        if path is not None:
            return [root] + path
    return None


def _module_position(tree: ast.Module, node: ast.stmt) -> Tuple[Optional[int], bool, bool]:
    """Top-level statement holding ``node``

    Returns:
        Tuple[Optional[int], bool, bool]: its index, whether it is ``node``
            itself, and whether executing it executes ``node`` as well
    """
    for index, stmt in enumerate(tree.body):
        if stmt is node:
            return index, True, True
        if stmt.lineno <= node.lineno <= stmt.end_lineno:
            path = _path_to(stmt, node) or []
            enclosing = path[:-1]
            return index, False, bool(path) and not any(isinstance(n, _FUNCTION_BODIES) for n in enclosing)
    return None, False, False


def resolve_target(raw: RawInlineTest, source: SourceFile) -> TargetStatement:
    """Nearest preceding statement in the same block that is not an inline test

    Raises:
        NoTargetError: nothing precedes the inline test in its block
        UnsupportedTargetError: the target cannot execute at module level
    """
    path, line = raw.location.path, raw.location.line
    node = None
    for stmt in reversed(raw.enclosing_block[:raw.index_in_block]):
        if not is_inline_test_statement(stmt):
            node = stmt
            break
    if node is None:
        raise NoTargetError("inline test has no preceding statement to test",
                            path=path, line=line)

    if isinstance(node, _UNSUPPORTED_TARGETS) or (
            isinstance(node, ast.Expr) and isinstance(node.value, (ast.Yield, ast.YieldFrom, ast.Await))):
        raise UnsupportedTargetError(
            f"target statement at line {node.lineno} ({type(node).__name__.lower()}) "
            "cannot run outside its function", path=path, line=line)

    text = strip_inline_tests(source.text, node)
    try:
        reads, bound = names_of(text + "\n")
    except SyntaxError as e:
        raise UnsupportedTargetError(f"target statement cannot run in isolation: {e.msg}",
                                     path=path, line=line)
    # read-modify-write names such as `count += 1` are free as well
    free = (reads - bound) | loads_before_stores(ast.parse(text))

    target_line = source.lines[node.lineno - 1]
    location = Location(path, node.lineno, char_column(target_line, node.col_offset))
    module_index, top_level, runs_with_enclosing = _module_position(source.syntax_tree, node)
    return TargetStatement(
        statement_text=text,
        location=location,
        free_names=frozenset(free),
        bound_names=frozenset(bound),
        module_index=module_index,
        top_level=top_level,
        runs_with_enclosing=runs_with_enclosing,
    )


class _NotLiteral(Exception):
    pass


def _literal(node: ast.expr):
    try:
        return ast.literal_eval(node)
    except (ValueError, TypeError, SyntaxError, MemoryError, RecursionError):
        raise _NotLiteral()


def _constructor_options(call: ast.Call, raise_malformed) -> Dict[str, object]:
    if len(call.args) > len(CONSTRUCTOR_ARGS):
        raise_malformed("BAD_ARITY", f"itest() takes at most {len(CONSTRUCTOR_ARGS)} arguments")
    pairs = []
    for name, arg in zip(CONSTRUCTOR_ARGS, call.args):
        if isinstance(arg, ast.Starred):
            raise_malformed("BAD_CONSTRUCTOR_ARG", "itest() arguments must be literals")
        pairs.append((name, arg))
    for keyword in call.keywords:
        if keyword.arg is None:
            raise_malformed("BAD_CONSTRUCTOR_ARG", "itest() does not accept **kwargs")
        if keyword.arg not in CONSTRUCTOR_ARGS:
            raise_malformed("BAD_CONSTRUCTOR_ARG", f"unknown itest() argument '{keyword.arg}'")
        pairs.append((keyword.arg, keyword.value))

    options = {}
    for name, node in pairs:
        if name in options:
            raise_malformed("BAD_CONSTRUCTOR_ARG", f"itest() argument '{name}' given twice")
        try:
            value = _literal(node)
        except _NotLiteral:
            raise_malformed("BAD_CONSTRUCTOR_ARG", f"itest() argument '{name}' must be a literal")
        if not _valid_option(name, value):
            raise_malformed("BAD_CONSTRUCTOR_ARG", f"invalid value for itest() argument '{name}': {value!r}")
        options[name] = value
    return options


def _valid_option(name: str, value) -> bool:
    if name == "test_name":
        return isinstance(value, str)
    if name in ("parameterized", "disabled"):
        return isinstance(value, bool)
    if name == "repeated":
        return isinstance(value, int) and not isinstance(value, bool) and value >= 1
    if name == "tag":
        return isinstance(value, (list, tuple)) and all(isinstance(t, str) for t in value)
    if name == "timeout":
        return isinstance(value, (int, float)) and not isinstance(value, bool) and value > 0
    return False


def _list_items(text: str, node: ast.expr) -> Optional[Tuple[str, ...]]:
    if isinstance(node, ast.List) and not any(isinstance(e, ast.Starred) for e in node.elts):
        return tuple(expression_text(text, e) for e in node.elts)
    return None


def _unroll_chain(expr: ast.expr, raise_malformed) -> Tuple[ast.Call, List[Tuple[str, ast.Call]]]:
    """Split ``itest(...).a(...).b(...)`` into the constructor and its method calls"""
    calls = []
    node = expr
    while True:
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Attribute):
            calls.append((node.func.attr, node))
            node = node.func.value
        elif isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            break
        elif isinstance(node, ast.Attribute):
            raise_malformed("UNKNOWN_METHOD", f"'{node.attr}' is not called")
        else:
            raise_malformed("UNKNOWN_METHOD", "inline test chain may only contain method calls")
    calls.reverse()
    return node, calls


def extract_declaration(raw: RawInlineTest, source: SourceFile) -> InlineTestDecl:
    """Parse an inline test statement into a declaration

    Args:
        raw (RawInlineTest): statement found by the finder
        source (SourceFile): file it was found in

    Raises:
        MalformedError: API misuse, ``reason`` names the rule that was broken
        NoTargetError: nothing precedes the inline test
        UnsupportedTargetError: target cannot run at module level

    Returns:
        InlineTestDecl: validated declaration bound to its target
    """
    path, line = raw.location.path, raw.location.line

    def raise_malformed(reason, message):
        raise MalformedError(message, path=path, line=line, reason=reason)

    if raw.embedded:
        raise_malformed("NOT_A_STATEMENT", "itest() must be used as a statement of its own")

    constructor, calls = _unroll_chain(raw.statement_ref.value, raise_malformed)
    options = _constructor_options(constructor, raise_malformed)
    target = resolve_target(raw, source)

    assumptions, assignments, checks = [], [], []
    for method, call in calls:
        if any(isinstance(a, ast.Starred) for a in call.args) or call.keywords:
            raise_malformed("BAD_ARITY", f"{method}() takes only positional arguments")
        args = call.args
        if method == "assume":
            if len(args) != 1:
                raise_malformed("BAD_ARITY", f"assume() takes 1 argument ({len(args)} given)")
            if checks:
                raise_malformed("ASSUME_AFTER_CHECK", "assume() must come before the first check_*()")
            assumptions.append(expression_text(source.text, args[0]))
        elif method == "given":
            if len(args) != 2:
                raise_malformed("BAD_ARITY", f"given() takes 2 arguments ({len(args)} given)")
            if checks:
                raise_malformed("GIVEN_AFTER_CHECK", "given() must come before the first check_*()")
            variable, value = args
            if not isinstance(variable, ast.Name):
                raise_malformed("NON_IDENTIFIER_GIVEN_TARGET",
                                "first argument of given() must be a variable name")
            if any(a.name == variable.id for a in assignments):
                raise_malformed("DUPLICATE_GIVEN", f"variable '{variable.id}' is given twice")
            assignments.append(Assignment(variable.id, expression_text(source.text, value),
                                          _list_items(source.text, value)))
        elif method.startswith("check_") and method[len("check_"):] in CHECK_KINDS:
            kind = method[len("check_"):]
            arity = 2 if kind in BINARY_CHECKS else 1
            if len(args) != arity:
                raise_malformed("BAD_ARITY", f"{method}() takes {arity} argument(s) ({len(args)} given)")
            actual = args[0]
            expected = args[1] if arity == 2 else None
            checks.append(Check(
                kind=kind,
                actual_expr=expression_text(source.text, actual),
                expected_expr=expression_text(source.text, expected) if expected is not None else None,
                actual_items=_list_items(source.text, actual),
                expected_items=_list_items(source.text, expected) if expected is not None else None,
            ))
        else:
            raise_malformed("UNKNOWN_METHOD", f"'{method}' is not part of the inline test API")

    if not checks:
        raise_malformed("NO_CHECK", "inline test has no check_*() call")

    decl = InlineTestDecl(
        location=raw.location,
        target=target,
        checks=checks,
        test_name=options.get("test_name"),
        parameterized=options.get("parameterized", False),
        repeated=options.get("repeated", 1),
        tags=list(options.get("tag", [])),
        disabled=options.get("disabled", False),
        timeout=options.get("timeout"),
        assumptions=assumptions,
        assignments=assignments,
    )
    for assignment in assignments:
        if assignment.name not in target.free_names:
            message = (f"{raw.location}: given variable '{assignment.name}' "
                       "is not read by the target statement")
            decl.warnings.append(message)
            print(f"[WARNING]: {message}", file=sys.stderr)
    return decl


def validate_parameterization(decl: InlineTestDecl) -> int:
    """Number of test cases the declaration expands to

    Raises:
        MalformedError: PARAM_NOT_LIST or PARAM_LENGTH_MISMATCH
    """
    if not decl.parameterized:
        return 1
    path, line = decl.location.path, decl.location.line

    lengths = []
    for assignment in decl.assignments:
        if assignment.items is None:
            raise MalformedError(f"given value for '{assignment.name}' must be a list literal "
                                 "in a parameterized test", path=path, line=line, reason="PARAM_NOT_LIST")
        lengths.append(len(assignment.items))
    for check in decl.checks:
        for items in (check.actual_items, check.expected_items):
            if items is not None:
                lengths.append(len(items))

    if not lengths:
        raise MalformedError("parameterized test has no list-literal values",
                             path=path, line=line, reason="PARAM_NOT_LIST")
    if len(set(lengths)) != 1 or lengths[0] == 0:
        raise MalformedError(f"parameter lists must have equal non-zero length, got {sorted(set(lengths))}",
                             path=path, line=line, reason="PARAM_LENGTH_MISMATCH")
    return lengths[0]
