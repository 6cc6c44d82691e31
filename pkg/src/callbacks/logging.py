import sys

from src.callbacks.base import Callback


class Logging(Callback):
    """Progress lines on stderr, stdout is reserved for the report"""

    def __init__(self, stream=None):
        self.stream = stream or sys.stderr
        self.done = 0
        self.total = 0

    def log(self, message):
        print(message, file=self.stream, flush=True)

    def setup(self, config, **kwargs):
        if config.verbosity > 0:
            self.log(f'[INFO]: Collecting inline tests from {", ".join(config.paths)} '
                     f'using {config.parallelism} worker(s)')

    def on_collection_end(self, config, cases, issues, **kwargs):
        self.total = len(cases)
        self.done = 0
        if config.verbosity > 0:
            self.log(f'[INFO]: Collected {len(cases)} test case(s), {len(issues)} collection issue(s)')
            for issue in issues:
                self.log(f'[WARNING]: {issue}' if issue.informational else f'[ERROR]: {issue}')

    def on_case_end(self, config, case, outcome, **kwargs):
        self.done += 1
        if config.verbosity > 0:
            self.log(f'[{self.done}/{self.total}] {case.id} {outcome.status.value} '
                     f'({outcome.duration:.3f}s)')

    def on_run_end(self, config, report, **kwargs):
        if config.verbosity > 0:
            self.log(f'[INFO]: Run finished in {report.wall_time:.2f}s')
