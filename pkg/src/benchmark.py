"""Run-time cost of inline tests as their number grows

    python -m src.benchmark --dups 10 100 1000 -n auto --csv dup.csv --plot dup.png
"""
import contextlib
import io
import os
import sys
import tempfile
import time
from argparse import ArgumentParser
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from src.cli import parallelism_arg, run
from src.discovery import RunConfig, resolve_parallelism

SUBJECT_TEMPLATE = r'''import re

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", name)
{tests}    return m.group(1)
'''
DUPLICATED_TEST = '    itest().given(name, "a:0").check_eq(m.group(1), "a")\n'

SLEEP_HEADER = '''import time

from inline import itest


def nap(seconds):
    time.sleep(seconds)
    return seconds

'''
SLEEP_TEST = 'done = nap({seconds!r})\nitest().check_eq(done, {seconds!r})\n'


def write_duplicated_corpus(directory: str, dup: int) -> str:
    """One subject file whose single inline test is repeated ``dup`` times"""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"split_name_dup{dup}.py")
    with open(path, "w", encoding="utf-8") as f:
        f.write(SUBJECT_TEMPLATE.format(tests=DUPLICATED_TEST * dup))
    return path


def write_sleep_corpus(directory: str, n: int, seconds: float) -> str:
    """``n`` independent inline tests that each sleep ``seconds``"""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"sleep_{n}.py")
    with open(path, "w", encoding="utf-8") as f:
        f.write(SLEEP_HEADER + SLEEP_TEST.format(seconds=seconds) * n)
    return path


def measure(paths: Sequence[str], parallelism=1, runs: int = 3, warmup: int = 1,
            interpreter: Sequence[str] = (sys.executable,)) -> float:
    """Mean wall time of the whole pipeline over ``runs`` measured runs

    Warm-up runs are executed first and discarded.
    """
    config = RunConfig(paths=list(paths), parallelism=parallelism,
                       interpreter_command=list(interpreter), verbosity=-1)
    timings = []
    for i in range(warmup + runs):
        start = time.perf_counter()
        with contextlib.redirect_stdout(io.StringIO()):
            code = run(config)
        elapsed = time.perf_counter() - start
        if code != 0:
            print(f'[WARNING]: benchmark run exited with {code}', file=sys.stderr)
        if i >= warmup:
            timings.append(elapsed)
    return float(np.mean(timings))


def duplication_experiment(dups: Sequence[int] = (10, 100, 1000), parallelism="auto",
                           runs: int = 3, warmup: int = 1, directory: str = None) -> pd.DataFrame:
    """Total and per-test time for each duplication factor"""
    rows = []
    with tempfile.TemporaryDirectory(prefix="itest-bench-") as scratch:
        directory = directory or scratch
        for dup in dups:
            path = write_duplicated_corpus(directory, dup)
            total = measure([path], parallelism=parallelism, runs=runs, warmup=warmup)
            rows.append({"dup": dup, "n_tests": dup, "total_s": total, "per_test_s": total / dup})
            print(f'[INFO]: dup={dup}: {total:.3f}s total, {1000 * total / dup:.2f}ms per test',
                  file=sys.stderr)
    return pd.DataFrame(rows, columns=["dup", "n_tests", "total_s", "per_test_s"])


def scaling_summary(frame: pd.DataFrame) -> Dict[str, object]:
    """Marginal cost per test and whether growth stays at most linear

    ``slope_ratio`` compares the cost per added test on the last segment
    with the one before it; above 1.2 the growth is worse than linear.
    """
    frame = frame.sort_values("n_tests")
    n = frame["n_tests"].to_numpy(dtype=float)
    total = frame["total_s"].to_numpy(dtype=float)
    fit = stats.linregress(n, total)
    segment_slopes = np.diff(total) / np.diff(n)
    ratio = float(segment_slopes[-1] / segment_slopes[-2]) if len(segment_slopes) > 1 else 1.0
    # power law exponent, 1 for linear growth
    exponent = float(np.polyfit(np.log(n), np.log(total), 1)[0])
    return {
        "slope_s_per_test": float(fit.slope),
        "intercept_s": float(fit.intercept),
        "r_squared": float(fit.rvalue ** 2),
        "segment_slopes": [float(s) for s in segment_slopes],
        "slope_ratio": ratio,
        "growth_exponent": exponent,
        "at_most_linear": ratio <= 1.2,
    }


def speedup_experiment(n: int = 100, seconds: float = 0.1, workers: Sequence = (1, 4),
                       runs: int = 1, warmup: int = 0) -> pd.DataFrame:
    """Wall time of the sleep corpus at each worker count, relative to the first"""
    rows = []
    with tempfile.TemporaryDirectory(prefix="itest-bench-") as directory:
        path = write_sleep_corpus(directory, n, seconds)
        for parallelism in workers:
            rows.append({"parallelism": parallelism,
                         "total_s": measure([path], parallelism=parallelism, runs=runs, warmup=warmup)})
    frame = pd.DataFrame(rows, columns=["parallelism", "total_s"])
    frame["speedup"] = frame["total_s"].iloc[0] / frame["total_s"]
    return frame


def get_argparser():
    parser = ArgumentParser(description="inline test duplication benchmark")
    parser.add_argument('--dups', nargs='+', type=int, default=[10, 100, 1000],
                        help='duplication factors of the example inline test')
    parser.add_argument('-n', dest='parallelism', default='auto', type=parallelism_arg,
                        help='worker count or auto')
    parser.add_argument('--runs', default=3, type=int, help='measured runs per point')
    parser.add_argument('--warmup', default=1, type=int, help='discarded runs per point')
    parser.add_argument('--speedup', default=0, type=int, metavar='N',
                        help='also time N sleeping tests at 1 worker vs -n workers')
    parser.add_argument('--csv', default=None, type=str, help='save the result table here')
    parser.add_argument('--plot', default=None, type=str, help='save the scaling plot here')
    return parser


def main(argv: List[str] = None) -> int:
    config = get_argparser().parse_args(argv)
    frame = duplication_experiment(config.dups, parallelism=config.parallelism,
                                   runs=config.runs, warmup=config.warmup)
    print(frame.to_string(index=False))
    if len(frame) > 1:
        for key, value in scaling_summary(frame).items():
            print(f'{key}: {value}')
    if config.speedup:
        workers = resolve_parallelism(config.parallelism)
        print(speedup_experiment(config.speedup, workers=(1, workers)).to_string(index=False))
    if config.csv:
        frame.to_csv(config.csv, index=False)
        print(f'[INFO]: Saved table: {config.csv}', file=sys.stderr)
    if config.plot:
        from src.viz.scaling_plots import plot_scaling
        plot_scaling(frame, config.plot)
        print(f'[INFO]: Saved plot: {config.plot}', file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
