import math

import numpy as np
import pytest

from obliq.stats import SummaryStats

ACCEPTANCE = []


def record(criterion, ok, detail=""):
    ACCEPTANCE.append((criterion, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(
            f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")


def random_stats(rng, n=None, fourth=False, signed=True):
    """Random well-conditioned statistics with |rho| in [0.05, 0.99]."""
    sxx = 10 ** rng.uniform(-2, 2)
    syy = 10 ** rng.uniform(-2, 2)
    rho = rng.uniform(0.05, 0.99)
    if signed and rng.random() < 0.5:
        rho = -rho
    kw = {}
    if fourth:
        kw = dict(sxxxy=rho * sxx ** 1.5 * math.sqrt(syy) * rng.uniform(2, 6),
                  sxyyy=rho * math.sqrt(sxx) * syy ** 1.5 * rng.uniform(2, 6))
    return SummaryStats.from_moments(sxx, syy, rho=rho,
                                     n=n if n else int(rng.integers(3, 1000)), **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def table4():
    return SummaryStats.from_moments(1.0, 1.0, rho=0.5, sxxxy=10.0, sxyyy=5.0)
