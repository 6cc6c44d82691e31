"""Select, order and run test cases in fresh interpreter processes"""
import json
import os
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, Iterable, List, Optional, Set, Tuple

import psutil

from src.assembler import SENTINELS, TestCase
from src.callbacks.base import Callback, CallbackList
from src.discovery import RunConfig
from src.outcome import Status, TestOutcome

# seconds allowed for a killed process tree to go away
KILL_GRACE = 0.5

# variables the interpreter needs to start, everything else is dropped
PASSTHROUGH_ENV = (
    "PATH", "SYSTEMROOT", "SYSTEMDRIVE", "COMSPEC", "PATHEXT", "WINDIR",
    "TMPDIR", "TEMP", "TMP", "HOME", "USERPROFILE", "LANG", "LC_ALL", "LC_CTYPE",
    "LD_LIBRARY_PATH", "DYLD_LIBRARY_PATH", "VIRTUAL_ENV", "CONDA_PREFIX",
)


def matches(case, config: RunConfig) -> bool:
    """Tag filter and name filter, both pass when unset"""
    if config.group_tags and not set(config.group_tags).intersection(case.tags):
        return False
    return config.name_filter is None or config.name_filter in case.display_name


def select(cases: Iterable[TestCase], config: RunConfig) -> Tuple[List[TestCase], List[TestOutcome]]:
    """Apply the tag and name filters

    Returns:
        Tuple[List[TestCase], List[TestOutcome]]: cases to run, and
            SKIPPED_DISABLED outcomes for selected cases that are disabled
    """
    runnable, disabled = [], []
    for case in cases:
        if not matches(case, config):
            continue
        if case.disabled:
            disabled.append(TestOutcome.for_case(case, Status.SKIPPED_DISABLED))
        else:
            runnable.append(case)
    return runnable, disabled


def default_key(case) -> Tuple[str, int, int]:
    return case.path, case.line, case.param_index


def bucket(tags: Iterable[str], order_tags: List[str]) -> int:
    """Index of the earliest order tag the case carries, or ``len(order_tags)``"""
    tags = set(tags)
    for index, tag in enumerate(order_tags):
        if tag in tags:
            return index
    return len(order_tags)


def order(cases: Iterable, config: RunConfig) -> list:
    return sorted(cases, key=lambda c: (bucket(c.tags, config.order_tags), default_key(c)))


def program_environment(subject_dir: str) -> Dict[str, str]:
    env = {name: os.environ[name] for name in PASSTHROUGH_ENV if name in os.environ}
    search_path = [os.path.abspath(subject_dir)]
    if os.environ.get("PYTHONPATH"):
        search_path.append(os.environ["PYTHONPATH"])
    env["PYTHONPATH"] = os.pathsep.join(search_path)
    env["PYTHONIOENCODING"] = "utf-8"
    env["PYTHONDONTWRITEBYTECODE"] = "1"
    return env


def kill_tree(pid: int) -> None:
    """Kill a process and everything it spawned"""
    try:
        parent = psutil.Process(pid)
        processes = parent.children(recursive=True) + [parent]
    except psutil.NoSuchProcess:
        return
    for process in processes:
        try:
            process.kill()
        except psutil.NoSuchProcess:
            pass
    psutil.wait_procs(processes, timeout=KILL_GRACE)


def _result_line(stdout: str) -> Optional[str]:
    for line in reversed(stdout.splitlines()):
        if line.startswith("ITEST-"):
            return line
    return None


def classify(returncode: int, stdout: str, stderr: str) -> Tuple[Status, Optional[dict], Optional[str]]:
    """Status of one program run from its exit code and result line"""
    line = _result_line(stdout)
    if line == SENTINELS.passed and returncode == 0:
        return Status.PASSED, None, None
    if line == SENTINELS.skipped and returncode == 0:
        return Status.SKIPPED_ASSUMPTION, None, None
    if line is not None and line.startswith(SENTINELS.failed + " "):
        try:
            return Status.FAILED, json.loads(line[len(SENTINELS.failed) + 1:]), None
        except ValueError:
            return Status.ERROR, None, f"unreadable failure record: {line}"
    detail = stderr.strip() or f"program exited with status {returncode} without a result"
    return Status.ERROR, None, detail


def run_program(command: List[str], env: Dict[str, str], cwd: Optional[str],
                timeout: Optional[float]) -> Tuple[Status, Optional[dict], Optional[str], float]:
    start = time.perf_counter()
    try:
        process = subprocess.Popen(command, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                                   stdin=subprocess.DEVNULL, env=env, cwd=cwd,
                                   encoding="utf-8", errors="replace")
    except OSError as e:
        return (Status.ERROR, None, f"cannot run interpreter command {command[:-1]!r}: {e}",
                time.perf_counter() - start)
    try:
        stdout, stderr = process.communicate(timeout=timeout)
    except subprocess.TimeoutExpired:
        kill_tree(process.pid)
        process.communicate()
        return Status.TIMEOUT, None, None, time.perf_counter() - start
    elapsed = time.perf_counter() - start
    status, failure, detail = classify(process.returncode, stdout, stderr)
    return status, failure, detail, elapsed


def run_case(case: TestCase, config: RunConfig, program_file: str,
             workdir: Optional[str] = None) -> TestOutcome:
    """Run the case's program ``case.repeated`` times, stopping at the first non-pass

    Args:
        case (TestCase): runnable case
        config (RunConfig): supplies the interpreter command
        program_file (str): generated program of the case
        workdir (str, optional): working directory, defaults to the program's directory

    Returns:
        TestOutcome: aggregated over the repetitions that ran
    """
    program_file = os.path.abspath(program_file)
    command = list(config.interpreter_command) + [program_file]
    env = program_environment(os.path.dirname(case.path) or ".")
    cwd = workdir or os.path.dirname(program_file)

    duration, runs = 0.0, 0
    status, failure, detail = Status.PASSED, None, None
    for repetition in range(case.repeated):
        status, failure, detail, elapsed = run_program(command, env, cwd, case.timeout)
        duration += elapsed
        runs += 1
        if status != Status.PASSED:
            if failure is not None:
                failure["repetition"] = repetition
            break
    if detail:
        # tracebacks name the per-run program directory
        detail = detail.replace(os.path.dirname(program_file) + os.sep, "")
    return TestOutcome.for_case(case, status, duration=duration, repetitions_run=runs,
                                failure=failure, error_detail=detail)


def run_suite(cases: List[TestCase], config: RunConfig, program_files: Dict[str, str],
              callbacks: Optional[Callback] = None, workdir: Optional[str] = None) -> List[TestOutcome]:
    """Run ordered cases on ``config.parallelism`` workers

    Workers take cases in the given order; the outcomes come back in that
    same order whatever the scheduling was.
    """
    callbacks = callbacks or CallbackList([])
    outcomes = {}

    def work(case):
        callbacks.on_case_start(config=config, case=case)
        return run_case(case, config, program_files[case.id], workdir)

    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        futures = {}
        for case in cases:
            future = pool.submit(work, case)
            futures[future] = case
        for future in as_completed(futures):
            case = futures[future]
            outcomes[case.id] = future.result()
            callbacks.on_case_end(config=config, case=case, outcome=outcomes[case.id])
    return [outcomes[case.id] for case in cases]


PROBE_PROGRAM = """\
import importlib.util
import json
import sys

missing = []
for name in sys.argv[1:]:
    try:
        if importlib.util.find_spec(name) is None:
            missing.append(name)
    except (ImportError, ValueError):
        missing.append(name)
print(json.dumps(missing))
"""


def probe_imports(requests: Dict[str, Set[str]], config: RunConfig) -> Dict[str, Set[str]]:
    """Modules that the configured interpreter cannot find

    Args:
        requests (Dict[str, Set[str]]): subject directory -> top-level module names
        config (RunConfig): supplies the interpreter command

    Returns:
        Dict[str, Set[str]]: subject directory -> missing modules; relative
            imports (names starting with ".") always count as missing
    """
    missing = {}
    for subject_dir, modules in sorted(requests.items()):
        relative = {m for m in modules if m.startswith(".")}
        absolute = sorted(modules - relative)
        found_missing = set(relative)
        if absolute:
            command = list(config.interpreter_command) + ["-c", PROBE_PROGRAM] + absolute
            try:
                result = subprocess.run(command, capture_output=True, encoding="utf-8", errors="replace",
                                        env=program_environment(subject_dir), stdin=subprocess.DEVNULL,
                                        timeout=60)
                found_missing.update(json.loads(result.stdout.strip().splitlines()[-1]))
            except (OSError, ValueError, IndexError, subprocess.TimeoutExpired):
                # cases will report the interpreter problem themselves
                pass
        if found_missing:
            missing[subject_dir] = found_missing
    return missing
