import io
import unittest
from types import SimpleNamespace

from src.callbacks import Callback, CallbackList, Logging
from src.discovery import RunConfig
from src.outcome import Status
from src.reporter import CollectionIssue, Report


class Recorder(Callback):

    def __init__(self):
        self.events = []

    def on_case_start(self, case, **kwargs):
        self.events.append(("start", case.id))

    def on_case_end(self, case, outcome, **kwargs):
        self.events.append(("end", case.id))


class CallbackListTestCase(unittest.TestCase):

    def test_fans_out_to_every_callback(self):
        first, second = Recorder(), Recorder()
        callbacks = CallbackList([first, second])
        case = SimpleNamespace(id="a.py::3")
        callbacks.on_case_start(config=RunConfig(), case=case)
        callbacks.on_case_end(config=RunConfig(), case=case, outcome=None)
        callbacks.on_run_end(config=RunConfig(), report=Report())
        self.assertEqual(first.events, [("start", "a.py::3"), ("end", "a.py::3")])
        self.assertEqual(first.events, second.events)


class LoggingTestCase(unittest.TestCase):

    def run_hooks(self, verbosity):
        stream = io.StringIO()
        logging = Logging(stream)
        config = RunConfig(paths=["src"], verbosity=verbosity)
        case = SimpleNamespace(id="a.py::3")
        outcome = SimpleNamespace(status=Status.PASSED, duration=0.25)
        logging.setup(config=config)
        logging.on_collection_end(config=config, cases=[case],
                                  issues=[CollectionIssue("b.py", "IMPORT_SKIPPED", "file skipped")])
        logging.on_case_end(config=config, case=case, outcome=outcome)
        logging.on_run_end(config=config, report=Report(wall_time=1.5))
        return stream.getvalue()

    def test_silent_by_default(self):
        self.assertEqual(self.run_hooks(0), "")

    def test_verbose_progress(self):
        text = self.run_hooks(1)
        self.assertIn("[INFO]: Collecting inline tests from src", text)
        self.assertIn("[WARNING]: b.py: IMPORT_SKIPPED: file skipped", text)
        self.assertIn("[1/1] a.py::3 PASSED (0.250s)", text)
        self.assertIn("[INFO]: Run finished in 1.50s", text)
