import numpy as np
import pytest

from weakwigner.grid import GridSpec, inner_product, random_superposition


@pytest.fixture(scope="session")
def grid():
    """Desk-scale grid used throughout: hbar = 1, M = 512, L = 10."""
    return GridSpec(512, 10.0, 1.0)


@pytest.fixture(scope="session")
def small_grid():
    """Coarser grid for property tests that run many examples."""
    return GridSpec(128, 8.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_pairs(grid, rng, n, min_overlap=0.05, spread=3.0):
    """Random well-contained pairs with a non-negligible overlap."""
    out = []
    while len(out) < n:
        a = random_superposition(grid, rng, spread=spread)
        b = random_superposition(grid, rng, spread=spread)
        if abs(inner_product(a, b)) > min_overlap:
            out.append((a, b))
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
