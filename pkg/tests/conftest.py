import numpy as np
import pytest

from curvlab.curvature import random_curv, trial_rng


@pytest.fixture
def rng():
    return np.random.default_rng(20071)


def random_orthogonal(n, rng):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_sym(n, rng):
    X = rng.standard_normal((n, n))
    return 0.5 * (X + X.T)


def random_traceless(n, rng):
    X = random_sym(n, rng)
    return X - np.trace(X) / n * np.eye(n)


def curvs(n, count, seed=0):
    return [random_curv(n, trial_rng(seed, n, k)) for k in range(count)]


# lines reported by the acceptance module, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
