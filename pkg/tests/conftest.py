import math

import numpy as np
import pytest

from silence import Interval, make_density
from silence.density import CATALOG

# The three asymmetric shapes used for the family comparison.
STUDY = {
    "unbalanced-laplace": {"lambda_left": 1.5, "lambda_right": 0.3},
    "circular-arc": {"left_radius": 2.0, "right_radius": 1.0},
    "triangular": {"lo": -0.25, "mode": 0.0, "hi": 1.0},
}

CATALOG_PARAMS = {
    "uniform": {"lo": 0.0, "hi": 1.0},
    "exponential": {"lambda": 1.0},
    "gaussian": {"mu": 0.0, "sigma": 1.0},
    "laplace": {"mu": 0.0, "b": 1.0},
    "rayleigh": {"sigma": 8.0},
    **STUDY,
}
assert set(CATALOG_PARAMS) == set(CATALOG)

NON_UNIFORM = [k for k in CATALOG_PARAMS if k != "uniform"]


def build(kind):
    return make_density(kind, CATALOG_PARAMS[kind])


@pytest.fixture(params=sorted(CATALOG_PARAMS))
def density(request):
    return build(request.param)


@pytest.fixture(params=sorted(NON_UNIFORM))
def nonuniform(request):
    return build(request.param)


def random_interval(d, rng, min_mass=0.02):
    """Interval between two random quantiles, holding at least ``min_mass``."""
    while True:
        u = np.sort(rng.uniform(1e-4, 1 - 1e-4, size=2))
        if u[1] - u[0] >= min_mass:
            return Interval(d.quantile(u[0]), d.quantile(u[1]))


def norm_cdf(x):
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def norm_pdf(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
