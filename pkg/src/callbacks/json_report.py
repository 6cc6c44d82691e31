import sys

from src.callbacks.base import Callback
from src.reporter import emit_json


class JsonReport(Callback):
    """Write the machine-readable report once the run is complete"""

    def __init__(self, path):
        self.path = path

    def on_run_end(self, config, report, **kwargs):
        emit_json(report, self.path)
        if config.verbosity > 0:
            print(f'[INFO]: Saved report: {self.path}', file=sys.stderr)
