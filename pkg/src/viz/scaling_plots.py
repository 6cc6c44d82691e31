import matplotlib as mpl

mpl.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["figure.figsize"] = (12.80, 4.80)


def plot_scaling(frame, filename=None):
    """Total and per-test run time against the number of inline tests

    Args:
        frame (DataFrame): rows from ``duplication_experiment``
        filename (str, optional): save the figure here, otherwise return it

    Returns:
        Figure: the figure when no filename is given
    """
    fig, (ax_total, ax_per_test) = plt.subplots(1, 2)
    n_tests = frame["n_tests"].to_numpy()

    ax_total.plot(n_tests, frame["total_s"], marker='o', color='b', label='measured')
    # least squares line through the measurements
    slope, intercept = np.polyfit(n_tests, frame["total_s"].to_numpy(), 1)
    xs = np.linspace(0, n_tests.max(), 100)
    ax_total.plot(xs, slope * xs + intercept, linestyle='--', color='orange',
                  label=f'fit: {slope * 1000:.1f} ms/test')
    ax_total.set_xlabel('inline tests')
    ax_total.set_ylabel('total time (s)')
    ax_total.legend()

    ax_per_test.plot(n_tests, frame["per_test_s"] * 1000, marker='o', color='b')
    ax_per_test.set_xscale('log')
    ax_per_test.set_xlabel('inline tests')
    ax_per_test.set_ylabel('time per test (ms)')

    fig.tight_layout()
    if filename is None:
        return fig
    fig.savefig(filename)
    plt.close(fig)
