"""Command line entry point: collect inline tests, run them, report"""
import os
import sys
import tempfile
import time
from argparse import ArgumentParser, ArgumentTypeError, RawDescriptionHelpFormatter
from collections import defaultdict
from contextlib import contextmanager
from typing import List, Optional, Tuple

from src import __version__
from src.assembler import (ModuleScope, TestCase, ensure_unique_ids, expand, resolve_dependencies,
                           test_id, write_programs)
from src.callbacks import CallbackList, JsonReport, Logging
from src.discovery import DEFAULT_INTERPRETER, RunConfig, SourceFile, load_sources, resolve_paths
from src.errors import CollectionError, NonexistentPath, ReportWriteError, UnresolvedNameError
from src.executor import matches, order, probe_imports, run_suite, select
from src.extractor import extract_declaration, validate_parameterization
from src.finder import find_inline_tests
from src.reporter import (USAGE_ERROR, CollectionIssue, Report, exit_code, render_listing,
                          render_terminal)

INTERPRETER_ENV = "ITEST_INTERPRETER"

DESCRIPTION = """\
Run the inline tests declared in Python source files.

Every inline test runs as a standalone program in a fresh interpreter
process. Only inline tests are run; unit tests in the same files are left
to the regular test runner.
"""


def parallelism_arg(value: str):
    if value == "auto":
        return value
    try:
        workers = int(value)
    except ValueError:
        raise ArgumentTypeError(f"expected a positive integer or 'auto', got {value!r}")
    if workers < 1:
        raise ArgumentTypeError(f"worker count must be >= 1, got {workers}")
    return workers


def positive_seconds(value: str) -> float:
    try:
        seconds = float(value)
    except ValueError:
        raise ArgumentTypeError(f"expected a number of seconds, got {value!r}")
    if not seconds > 0:
        raise ArgumentTypeError(f"timeout must be positive, got {value}")
    return seconds


def get_argparser():
    parser = ArgumentParser(prog="itest-runner", description=DESCRIPTION,
                            formatter_class=RawDescriptionHelpFormatter)

    parser.add_argument('paths', nargs='*', default=["."],
                        help='files or directories to scan for inline tests (default: .)')
    # selection and ordering
    parser.add_argument('--group', '--inlinetest-group', dest='group_tags', action='append', default=[],
                        metavar='TAG', help='run only tests carrying one of these tags (repeatable)')
    parser.add_argument('--order', '--inlinetest-order', dest='order_tags', action='append', default=[],
                        metavar='TAG', help='run tests with this tag first, in flag order (repeatable)')
    parser.add_argument('-k', dest='name_filter', default=None, metavar='EXPR',
                        help='run only tests whose name contains EXPR')
    # execution
    parser.add_argument('-n', dest='parallelism', default=1, type=parallelism_arg, metavar='N|auto',
                        help='number of worker processes, auto uses every logical CPU (default: 1)')
    parser.add_argument('--ignore-import-errors', '--inlinetest-ignore-import-errors',
                        dest='ignore_import_errors', action='store_true',
                        help='skip files whose imports cannot be resolved instead of failing their tests')
    parser.add_argument('--timeout', dest='default_timeout', default=None, type=positive_seconds,
                        metavar='SECONDS', help='timeout for tests that declare none')
    parser.add_argument('--interpreter', default=os.environ.get(INTERPRETER_ENV, DEFAULT_INTERPRETER),
                        metavar='CMD', help=f'command running the generated programs '
                                            f'(default: ${INTERPRETER_ENV} or {DEFAULT_INTERPRETER})')
    parser.add_argument('--keep-programs', default=None, metavar='DIR',
                        help='write the generated programs to DIR and keep them')
    # output
    parser.add_argument('--report', dest='report_path', default=None, metavar='PATH',
                        help='write a JSON report to PATH')
    parser.add_argument('--list-only', action='store_true',
                        help='list the collected tests without running them')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='count', default=0,
                           help='print progress and full error output')
    verbosity.add_argument('-q', '--quiet', action='store_true',
                           help='print only problems and the summary')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    return parser


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    """Build the run configuration, exits with status 2 on bad flags"""
    args = get_argparser().parse_args(argv)
    return RunConfig(
        paths=args.paths,
        group_tags=args.group_tags,
        order_tags=args.order_tags,
        name_filter=args.name_filter,
        parallelism=args.parallelism,
        ignore_import_errors=args.ignore_import_errors,
        default_timeout=args.default_timeout,
        interpreter_command=args.interpreter,
        report_path=args.report_path,
        list_only=args.list_only,
        verbosity=-1 if args.quiet else args.verbose,
        keep_programs=args.keep_programs,
    )


def collect_file(source: SourceFile, config: RunConfig) -> Tuple[List[TestCase], List[CollectionIssue]]:
    """Test cases of one subject file, a bad inline test only costs itself"""
    cases, issues = [], []
    raws = find_inline_tests(source)
    if not raws:
        return cases, issues
    scope = ModuleScope(source)
    for raw in raws:
        try:
            decl = extract_declaration(raw, source)
            n = validate_parameterization(decl)
            support = resolve_dependencies(decl, source, scope)
        except CollectionError as e:
            issues.append(CollectionIssue.from_error(e))
            continue
        cases.extend(expand(decl, n, support, default_timeout=config.default_timeout))
    return cases, issues


def collect(config: RunConfig) -> Tuple[List[TestCase], List[CollectionIssue]]:
    """Discover, parse and assemble every inline test under the configured paths

    Raises:
        NonexistentPath: a path argument does not exist
    """
    paths = resolve_paths(config)
    sources, load_errors = load_sources(paths, workers=config.parallelism)
    cases = []
    issues = [CollectionIssue.from_error(e) for e in load_errors]
    for source in sources:
        file_cases, file_issues = collect_file(source, config)
        cases.extend(file_cases)
        issues.extend(file_issues)
    return ensure_unique_ids(cases), issues


def subject_dir(case: TestCase) -> str:
    return os.path.dirname(case.path) or "."


def apply_import_probe(cases: List[TestCase], issues: List[CollectionIssue],
                       config: RunConfig) -> Tuple[List[TestCase], List[CollectionIssue]]:
    """Drop cases whose copied imports the interpreter cannot satisfy"""
    requests = defaultdict(set)
    for case in cases:
        requests[subject_dir(case)].update(case.support_modules)
    requests = {d: modules for d, modules in requests.items() if modules}
    if not requests:
        return cases, issues
    missing = probe_imports(requests, config)

    def absent(case):
        return [m for m in case.support_modules if m in missing.get(subject_dir(case), ())]

    broken_files = {case.path: absent(case) for case in cases if absent(case)}
    kept, reported = [], set()
    issues = list(issues)
    for case in cases:
        if case.path not in broken_files:
            kept.append(case)
        elif config.ignore_import_errors:
            if case.path not in reported:
                reported.add(case.path)
                modules = ", ".join(broken_files[case.path])
                issues.append(CollectionIssue(path=case.path, reason="IMPORT_SKIPPED",
                                              message=f"file skipped, cannot import {modules}"))
        elif absent(case):
            decl_id = test_id(case.decl_ref)
            if decl_id not in reported:
                reported.add(decl_id)
                module = absent(case)[0]
                error = UnresolvedNameError(module.lstrip(".") or module, decl_id, path=case.path,
                                            line=case.line,
                                            detail=f"module '{module}' cannot be imported")
                issues.append(CollectionIssue.from_error(error))
        else:
            kept.append(case)
    return kept, issues


@contextmanager
def program_directory(config: RunConfig):
    if config.keep_programs:
        os.makedirs(config.keep_programs, exist_ok=True)
        yield os.path.abspath(config.keep_programs)
    else:
        with tempfile.TemporaryDirectory(prefix="itest-") as directory:
            yield directory


def _issue_key(issue: CollectionIssue):
    return issue.path, issue.line or 0, issue.reason


def run(config: RunConfig) -> int:
    """Collect, select, run and report, returns the exit code"""
    start = time.perf_counter()
    callbacks = [Logging()]
    if config.report_path:
        callbacks.append(JsonReport(config.report_path))
    cb = CallbackList(callbacks)
    cb.setup(config=config)
    try:
        cases, issues = collect(config)
        if config.list_only:
            listed = order([case for case in cases if matches(case, config)], config)
            issues = sorted(issues, key=_issue_key)
            cb.on_collection_end(config=config, cases=listed, issues=issues)
            print(render_listing(listed, issues), end="")
            return 1 if any(not issue.informational for issue in issues) else 0

        cases, issues = apply_import_probe(cases, issues, config)
        issues = sorted(issues, key=_issue_key)
        runnable, skipped = select(cases, config)
        runnable = order(runnable, config)
        cb.on_collection_end(config=config, cases=runnable, issues=issues)

        with program_directory(config) as directory:
            files = write_programs(runnable, directory)
            outcomes = run_suite(runnable, config, files, callbacks=cb, workdir=directory)

        report = Report(outcomes=order(outcomes + skipped, config), collection_errors=issues,
                        wall_time=time.perf_counter() - start, config=config.to_dict())
        print(render_terminal(report, config.verbosity), end="")
        cb.on_run_end(config=config, report=report)
        return exit_code(report)
    finally:
        cb.teardown(config=config)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else USAGE_ERROR
    try:
        return run(config)
    except (NonexistentPath, ReportWriteError) as e:
        print(f"[ERROR]: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
