import os
import sys
import threading
import time
import unittest
from types import SimpleNamespace

from src.assembler import ensure_unique_ids, write_programs
from src.callbacks import Callback, CallbackList
from src.cli import collect_file
from src.discovery import RunConfig, load_source
from src.executor import Status, classify, order, run_case, run_suite, select

CORPUS = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")


def corpus_cases(*parts, config=None):
    cases, issues = collect_file(load_source(os.path.join(CORPUS, *parts)), config or RunConfig())
    assert issues == []
    return ensure_unique_ids(cases)


def run_corpus(directory, *parts, config=None):
    config = config or RunConfig(interpreter_command=[sys.executable])
    cases = corpus_cases(*parts, config=config)
    files = write_programs(cases, str(directory))
    return [run_case(case, config, files[case.id]) for case in cases]


def test_split_name_passes(tmp_path):
    [outcome] = run_corpus(tmp_path, "split_name.py")
    assert outcome.status == Status.PASSED
    assert outcome.repetitions_run == 1
    assert outcome.failure is None and outcome.error_detail is None


def test_mutated_expected_value_fails(tmp_path):
    [outcome] = run_corpus(tmp_path, "split_name_mutated.py")
    assert outcome.status == Status.FAILED
    assert outcome.failure["kind"] == "eq"
    assert outcome.failure["check"] == 'check_eq(m.group(1), "aa")'
    assert outcome.failure["actual_expr"] == "m.group(1)"
    assert outcome.failure["actual_repr"] == "'a'"
    assert outcome.failure["expected_repr"] == "'aa'"
    assert outcome.failure["repetition"] == 0


def test_every_oracle_passes(tmp_path):
    outcomes = run_corpus(tmp_path, "features", "oracles.py")
    assert [o.status for o in outcomes] == [Status.PASSED] * 8


def test_parameterized_cases_pass(tmp_path):
    outcomes = run_corpus(tmp_path, "features", "parameterized.py")
    assert [(o.param_index, o.status) for o in outcomes] == [(0, Status.PASSED), (1, Status.PASSED)]


def test_repetitions(tmp_path):
    [outcome] = run_corpus(tmp_path, "features", "repeated.py")
    assert outcome.status == Status.PASSED
    assert outcome.repetitions_run == 2


def test_timeout_kills_the_program(tmp_path):
    start = time.perf_counter()
    [outcome] = run_corpus(tmp_path, "features", "timeout.py")
    assert outcome.status == Status.TIMEOUT
    assert outcome.duration < 1.5
    assert time.perf_counter() - start < 3


def test_assumptions(tmp_path):
    outcomes = run_corpus(tmp_path, "features", "assumption.py")
    assert [o.status for o in outcomes] == [Status.SKIPPED_ASSUMPTION, Status.PASSED]


def test_unterminated_target_output(tmp_path):
    passed, failed, printed = run_corpus(tmp_path, "features", "unterminated_output.py")
    assert passed.status == Status.PASSED
    assert failed.status == Status.FAILED
    assert (failed.failure["actual_repr"], failed.failure["expected_repr"]) == ("3", "4")
    assert printed.status == Status.PASSED


def test_target_in_module_level_block_runs_once(tmp_path):
    [outcome] = run_corpus(tmp_path, "features", "module_block.py")
    assert outcome.status == Status.PASSED


def test_exception_in_target_is_an_error(tmp_path):
    [outcome] = run_corpus(tmp_path, "features", "crashing.py")
    assert outcome.status == Status.ERROR
    assert "TypeError" in outcome.error_detail
    assert str(tmp_path) not in outcome.error_detail


def test_nested_and_top_level_targets(tmp_path):
    outcomes = run_corpus(tmp_path, "features", "nested.py") + run_corpus(tmp_path, "features", "helpers.py")
    assert [o.status for o in outcomes] == [Status.PASSED] * 4


def test_missing_interpreter_is_reported(tmp_path):
    config = RunConfig(interpreter_command=[str(tmp_path / "no-such-python")])
    [outcome] = run_corpus(tmp_path, "split_name.py", config=config)
    assert outcome.status == Status.ERROR
    assert "no-such-python" in outcome.error_detail


class ClassifyTestCase(unittest.TestCase):

    def test_sentinels(self):
        self.assertEqual(classify(0, "ITEST-PASS\n", "")[0], Status.PASSED)
        self.assertEqual(classify(0, "noise\nITEST-SKIP-ASSUMPTION\n", "")[0], Status.SKIPPED_ASSUMPTION)
        status, failure, _ = classify(1, 'ITEST-FAIL {"kind": "true", "actual_repr": "0"}\n', "")
        self.assertEqual(status, Status.FAILED)
        self.assertEqual(failure, {"kind": "true", "actual_repr": "0"})

    def test_no_sentinel_is_an_error(self):
        status, failure, detail = classify(1, "", "Traceback ...\nNameError: name 'w' is not defined\n")
        self.assertEqual(status, Status.ERROR)
        self.assertIsNone(failure)
        self.assertIn("NameError", detail)
        self.assertEqual(classify(0, "", "")[0], Status.ERROR)

    def test_pass_with_nonzero_exit_is_an_error(self):
        self.assertEqual(classify(3, "ITEST-PASS\n", "")[0], Status.ERROR)


def fake_case(line, tags=(), name=None, disabled=False, path="a.py", param_index=0):
    case_id = f"{path}::{line}"
    return SimpleNamespace(id=case_id, display_name=name or case_id, path=path, line=line,
                           param_index=param_index, tags=list(tags), disabled=disabled)


class SelectTestCase(unittest.TestCase):

    def test_group_tags(self):
        cases = [fake_case(1, ["str"]), fake_case(2, ["regex"]), fake_case(3, ["bit", "str"])]
        runnable, skipped = select(cases, RunConfig(group_tags=["str", "bit"]))
        self.assertEqual([c.line for c in runnable], [1, 3])
        self.assertEqual(skipped, [])

    def test_name_filter(self):
        cases = [fake_case(1, name="test_add_small"), fake_case(2, name="check_mul")]
        runnable, _ = select(cases, RunConfig(name_filter="add"))
        self.assertEqual([c.display_name for c in runnable], ["test_add_small"])

    def test_disabled_case_is_skipped_not_run(self):
        runnable, skipped = select([fake_case(1, disabled=True)], RunConfig())
        self.assertEqual(runnable, [])
        self.assertEqual([o.status for o in skipped], [Status.SKIPPED_DISABLED])
        self.assertEqual(skipped[0].repetitions_run, 0)

    def test_filters_apply_to_disabled_cases(self):
        runnable, skipped = select([fake_case(1, ["x"], disabled=True)], RunConfig(group_tags=["y"]))
        self.assertEqual((runnable, skipped), ([], []))


class OrderTestCase(unittest.TestCase):

    def test_tag_buckets_then_rest(self):
        a, b, c = fake_case(9, ["str"]), fake_case(3, ["bit"]), fake_case(1)
        self.assertEqual(order([c, b, a], RunConfig(order_tags=["str", "bit"])), [a, b, c])

    def test_default_order(self):
        cases = [fake_case(5, path="b.py"), fake_case(7), fake_case(2), fake_case(2, param_index=1)]
        ordered = order(cases, RunConfig())
        self.assertEqual([(c.path, c.line, c.param_index) for c in ordered],
                         [("a.py", 2, 0), ("a.py", 2, 1), ("a.py", 7, 0), ("b.py", 5, 0)])

    def test_earliest_bucket_wins(self):
        both, bit = fake_case(1, ["bit", "str"]), fake_case(0, ["bit"])
        self.assertEqual(order([bit, both], RunConfig(order_tags=["str", "bit"])), [both, bit])


def test_parallel_suite_keeps_order(tmp_path):
    config = RunConfig(interpreter_command=[sys.executable], parallelism=4)
    cases = corpus_cases("features", "oracles.py") + corpus_cases("features", "tags.py")
    files = write_programs(cases, str(tmp_path))
    outcomes = run_suite(cases, config, files)
    assert [o.case_id for o in outcomes] == [c.id for c in cases]
    assert all(o.status == Status.PASSED for o in outcomes)



class StartRecorder(Callback):

    def __init__(self):
        self.started = []
        self.lock = threading.Lock()

    def on_case_start(self, case, **kwargs):
        with self.lock:
            self.started.append((case.id, threading.current_thread() is threading.main_thread()))


def test_case_start_fires_in_the_worker(tmp_path):
    config = RunConfig(interpreter_command=[sys.executable], parallelism=2)
    cases = corpus_cases("features", "parameterized.py")
    files = write_programs(cases, str(tmp_path))
    recorder = StartRecorder()
    run_suite(cases, config, files, callbacks=CallbackList([recorder]))
    assert sorted(recorder.started) == sorted((case.id, False) for case in cases)
