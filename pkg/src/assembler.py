"""Turn inline test declarations into standalone test programs

A generated program contains only what the test needs: the imports and
top-level definitions the test reads (copied from the subject file), the
``given`` assignments, the target statement and one instrumented assertion
per check. Its last line of output is a sentinel the executor parses.
"""
import ast
import dataclasses
import hashlib
import os
import re
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from src.discovery import SourceFile
from src.errors import UnresolvedNameError
from src.extractor import Check, InlineTestDecl
from src.finder import is_inline_test_statement
from src.syntax import BUILTIN_NAMES, expression_reads, indent_block, names_of, strip_inline_tests


class SentinelProtocol(NamedTuple):
    passed: str = "ITEST-PASS"
    skipped: str = "ITEST-SKIP-ASSUMPTION"
    failed: str = "ITEST-FAIL"


SENTINELS = SentinelProtocol()

# condition that must hold for each check kind, over the evaluated operands
CHECK_CONDITIONS = {
    "eq": "{a} == {e}",
    "neq": "{a} != {e}",
    "true": "{a}",
    "false": "not {a}",
    "none": "{a} is None",
    "not_none": "{a} is not None",
    "same": "{a} is {e}",
    "not_same": "{a} is not {e}",
}

FAIL_HELPER = '''\
def __itest_fail(kind, check, actual_expr, actual, *expected):
    import json
    import sys

    def _repr(value):
        try:
            return repr(value)
        except Exception as e:
            return "<repr failed: %s>" % type(e).__name__

    record = {"kind": kind, "check": check, "actual_expr": actual_expr, "actual_repr": _repr(actual)}
    if expected:
        record["expected_repr"] = _repr(expected[0])
    sys.stdout.write("\\n%s %s\\n" % (FAILED, json.dumps(record, sort_keys=True)))
    sys.stdout.flush()
    sys.exit(1)'''.replace("FAILED", repr(SENTINELS.failed))


class SupportSet(NamedTuple):
    statements: Tuple[str, ...]
    # top-level modules named by copied import statements, relative ones start with "."
    modules: Tuple[str, ...] = ()


@dataclass(frozen=True)
class TestProgram:
    support_statements: Tuple[str, ...]
    input_statements: Tuple[str, ...]
    target_text: str
    assertion_statements: Tuple[str, ...]
    assumption_expr: Optional[str] = None
    sentinel_protocol: SentinelProtocol = SENTINELS


@dataclass
class TestCase:
    id: str
    display_name: str
    decl_ref: InlineTestDecl
    param_index: int
    tags: List[str]
    disabled: bool
    repeated: int
    timeout: Optional[float]
    program: TestProgram
    support_modules: Tuple[str, ...] = ()

    @property
    def path(self) -> str:
        return self.decl_ref.location.path

    @property
    def line(self) -> int:
        return self.decl_ref.location.line


class _TopLevel(NamedTuple):
    text: str
    reads: frozenset
    bound: frozenset
    modules: Tuple[str, ...]
    is_future: bool
    is_star: bool


class ModuleScope:
    """Top-level statements of a subject file and the names they bind

    Built once per file and shared by all of its inline tests.
    """

    def __init__(self, source: SourceFile) -> None:
        self.source = source
        self.statements: Dict[int, _TopLevel] = {}
        self.binders: Dict[str, List[int]] = defaultdict(list)
        for index, node in enumerate(source.syntax_tree.body):
            if is_inline_test_statement(node):
                continue
            text = strip_inline_tests(source.text, node)
            try:
                reads, bound = names_of(text + "\n")
            except SyntaxError:
                reads, bound = set(), set()
            self.statements[index] = _TopLevel(
                text=text,
                reads=frozenset(reads),
                bound=frozenset(bound),
                modules=_imported_modules(node),
                is_future=isinstance(node, ast.ImportFrom) and node.module == "__future__",
                is_star=isinstance(node, ast.ImportFrom) and any(a.name == "*" for a in node.names),
            )
            for name in bound:
                self.binders[name].append(index)

    def binding(self, name: str, before: Optional[int]) -> Optional[int]:
        """Statement that provides ``name``, preferring the last one before ``before``"""
        candidates = self.binders.get(name)
        if not candidates:
            return None
        if before is not None:
            earlier = [i for i in candidates if i < before]
            if earlier:
                return earlier[-1]
        return candidates[-1]

    def star_imports(self) -> List[int]:
        return [i for i, stmt in self.statements.items() if stmt.is_star]

    def future_imports(self) -> List[int]:
        return [i for i, stmt in self.statements.items() if stmt.is_future]


def _imported_modules(node: ast.stmt) -> Tuple[str, ...]:
    if isinstance(node, ast.Import):
        return tuple(alias.name.split(".")[0] for alias in node.names)
    if isinstance(node, ast.ImportFrom):
        if node.module == "__future__":
            return ()
        if node.level:
            return ("." * node.level + (node.module or ""),)
        return (node.module.split(".")[0],)
    return ()


def test_id(decl: InlineTestDecl, param_index: Optional[int] = None) -> str:
    base = f"{decl.location.path}::{decl.location.line}"
    if param_index is None:
        return base
    return f"{base}[p{param_index}]"


def body_reads(decl: InlineTestDecl) -> set:
    """Names the assembled body reads that neither the inputs nor the target bind"""
    reads = set(decl.target.free_names)
    for assignment in decl.assignments:
        reads |= expression_reads(assignment.value)
    for expr in decl.assumptions:
        reads |= expression_reads(expr)
    for check in decl.checks:
        reads |= expression_reads(check.actual_expr)
        if check.expected_expr is not None:
            reads |= expression_reads(check.expected_expr)
    given = {a.name for a in decl.assignments}
    bound_first = set(decl.target.bound_names) - set(decl.target.free_names)
    return reads - given - bound_first - BUILTIN_NAMES


def resolve_dependencies(decl: InlineTestDecl, source: SourceFile,
                         scope: Optional[ModuleScope] = None) -> SupportSet:
    """Imports and top-level definitions the test program needs

    Free names are resolved against the subject file's top level, copying
    the binding statements and, transitively, whatever those read, in
    their original order.

    Args:
        decl (InlineTestDecl): validated declaration
        source (SourceFile): the file the declaration comes from
        scope (ModuleScope, optional): cached analysis of ``source``

    Raises:
        UnresolvedNameError: a name is neither builtin, given, bound by the
            target nor bound at the subject file's top level

    Returns:
        SupportSet: support statement texts in source order and the modules they import
    """
    scope = scope or ModuleScope(source)
    target = decl.target
    start = target.module_index if target.runs_with_enclosing else None

    selected = set(scope.future_imports())
    pending = deque((name, start) for name in sorted(body_reads(decl)))
    visited = set()
    while pending:
        name, before = pending.popleft()
        if (name, before) in visited or name in BUILTIN_NAMES:
            continue
        visited.add((name, before))
        index = scope.binding(name, before)
        if index is None:
            stars = scope.star_imports()
            if stars:
                selected.update(stars)
                continue
            raise UnresolvedNameError(
                name, test_id(decl), path=decl.location.path, line=decl.location.line,
                detail="not bound at module level; locals must be provided with given()")
        if target.runs_with_enclosing and index == target.module_index:
            if target.top_level:
                continue
            # copying the enclosing block would run the target a second time
            raise UnresolvedNameError(
                name, test_id(decl), path=decl.location.path, line=decl.location.line,
                detail="bound in the block around the target; provide it with given()")
        if index in selected:
            continue
        selected.add(index)
        for read in sorted(scope.statements[index].reads):
            pending.append((read, index))

    order = sorted(selected)
    modules = []
    for index in order:
        for module in scope.statements[index].modules:
            if module not in modules:
                modules.append(module)
    return SupportSet(tuple(scope.statements[i].text for i in order), tuple(modules))


def _operand(expr: str) -> str:
    """Expression text usable as the right-hand side of an assignment"""
    if "\n" not in expr:
        try:
            ast.parse(f"__itest_operand = {expr}")
            return expr
        except SyntaxError:
            pass
    return f"({expr})"


def _pick(items: Optional[Tuple[str, ...]], whole: str, index: int, parameterized: bool) -> str:
    if parameterized and items is not None:
        return items[index]
    return whole


def _assertion(check: Check) -> str:
    lines = [f"__itest_actual = {_operand(check.actual_expr)}"]
    if check.is_binary:
        lines.append(f"__itest_expected = {_operand(check.expected_expr)}")
    condition = CHECK_CONDITIONS[check.kind].format(a="__itest_actual", e="__itest_expected")
    args = f"{check.kind!r}, {check.source_text!r}, {check.actual_expr!r}, __itest_actual"
    if check.is_binary:
        args += ", __itest_expected"
    lines.append(f"if not ({condition}):")
    lines.append(f"    __itest_fail({args})")
    return "\n".join(lines)


def _assumption(expressions: Sequence[str]) -> Optional[str]:
    if not expressions:
        return None
    if len(expressions) == 1:
        return _operand(expressions[0])
    return " and ".join(f"({expr})" for expr in expressions)


def expand(decl: InlineTestDecl, n: int, support: SupportSet = SupportSet(()),
           default_timeout: Optional[float] = None) -> List[TestCase]:
    """One test case per parameter index

    Case ``i`` takes element ``i`` of every list-literal ``given`` value and
    list-literal check argument; other check arguments are shared.
    """
    cases = []
    for index in range(n):
        parameterized = decl.parameterized
        inputs = tuple(
            f"{a.name} = {_operand(_pick(a.items, a.value, index, parameterized))}"
            for a in decl.assignments)
        checks = [
            dataclasses.replace(
                check,
                actual_expr=_pick(check.actual_items, check.actual_expr, index, parameterized),
                expected_expr=(_pick(check.expected_items, check.expected_expr, index, parameterized)
                               if check.is_binary else None))
            for check in decl.checks]
        program = TestProgram(
            support_statements=tuple(support.statements),
            input_statements=inputs,
            target_text=decl.target.statement_text,
            assertion_statements=tuple(_assertion(c) for c in checks),
            assumption_expr=_assumption(decl.assumptions),
        )
        case_id = test_id(decl, index if parameterized else None)
        cases.append(TestCase(
            id=case_id,
            display_name=decl.test_name or case_id,
            decl_ref=decl,
            param_index=index,
            tags=list(decl.tags),
            disabled=decl.disabled,
            repeated=decl.repeated,
            timeout=decl.timeout if decl.timeout is not None else default_timeout,
            program=program,
            support_modules=tuple(support.modules),
        ))
    return cases


def ensure_unique_ids(cases: List[TestCase]) -> List[TestCase]:
    """Give inline tests sharing a line a ``:column`` suffix after the line number"""
    seen = set()
    for case in cases:
        if case.id in seen:
            location = case.decl_ref.location
            base = f"{location.path}::{location.line}:{location.column}"
            suffix = f"[p{case.param_index}]" if case.decl_ref.parameterized else ""
            if case.display_name == case.id:
                case.display_name = base + suffix
            case.id = base + suffix
        seen.add(case.id)
    return cases


def _sentinel_print(marker: str) -> str:
    # starts a fresh line even when the target left output unterminated
    line = "\n" + marker
    return f"print({line!r}, flush=True)"


def generate_program(case: TestCase) -> str:
    """Source of the standalone program for one test case"""
    program = case.program
    sentinels = program.sentinel_protocol
    body = list(program.input_statements)
    body.append(program.target_text)
    body.extend(program.assertion_statements)
    body.append(_sentinel_print(sentinels.passed))
    body_text = "\n".join(body)

    parts = [f"# inline test {case.id}"]
    parts.extend(program.support_statements)
    parts.append(FAIL_HELPER)
    if program.assumption_expr is None:
        parts.append(body_text)
    else:
        parts.append(f"if {program.assumption_expr}:\n"
                     f"{indent_block(body_text)}\n"
                     f"else:\n"
                     f"    {_sentinel_print(sentinels.skipped)}")
    return "\n\n".join(parts) + "\n"


def program_filename(case: TestCase) -> str:
    """Sanitized test id, with a short digest so distinct ids never collide"""
    digest = hashlib.sha1(case.id.encode("utf-8")).hexdigest()[:8]
    stem = re.sub(r"[^A-Za-z0-9_.-]+", "_", case.id).strip("_.")[-80:]
    return f"{stem}-{digest}.py"


def write_programs(cases: Sequence[TestCase], directory: str) -> Dict[str, str]:
    """Write one program file per case, returns case id -> file path"""
    os.makedirs(directory, exist_ok=True)
    files = {}
    for case in cases:
        filename = os.path.join(directory, program_filename(case))
        with open(filename, "w", encoding="utf-8") as f:
            f.write(generate_program(case))
        files[case.id] = filename
    return files
