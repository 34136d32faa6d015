"""
Shared fixtures: seeded tiny problems and tight solver settings.
"""

import numpy as np
import pytest

from sparsemlm.core.problem import build_problem
from sparsemlm.settings import SolverConfig

TIGHT_TOL = 1e-12
ADMM_TIGHT_TOL = 1e-11
TIGHT_MAX_ITER = 1_000_000


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow simulation and timing tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def random_data(n, m, p_raw, q_raw, seed, signal=2.0, noise=0.5):
    """Raw covariates plus a response with a sparse bilinear signal."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p_raw))
    Z = rng.normal(size=(m, q_raw))
    B = rng.normal(0.0, signal, (p_raw + 1, q_raw + 1)) * (rng.random((p_raw + 1, q_raw + 1)) < 0.5)
    design_x = np.column_stack([np.ones(n), X])
    design_z = np.column_stack([np.ones(m), Z])
    Y = design_x @ B @ design_z.T + rng.normal(0.0, noise, (n, m))
    return Y, X, Z


@pytest.fixture
def make_problem():
    """Factory for seeded problems; sizes are raw covariate counts."""
    def factory(n=6, m=5, p_raw=2, q_raw=2, seed=0, intercept_x=True, intercept_z=True, standardize=True):
        Y, X, Z = random_data(n, m, p_raw, q_raw, seed)
        return build_problem(
            Y, X, Z, intercept_x=intercept_x, intercept_z=intercept_z, standardize=standardize
        )
    return factory


@pytest.fixture
def tiny_problem(make_problem):
    return make_problem()


@pytest.fixture
def tight():
    """SolverConfig for an algorithm, converged far below test tolerances."""
    def factory(algorithm, **overrides):
        # the ADMM residuals carry round-off from the rotated solve
        tol = ADMM_TIGHT_TOL if algorithm == "admm" else TIGHT_TOL
        settings = {"algorithm": algorithm, "tol": tol, "max_iter": TIGHT_MAX_ITER}
        settings.update(overrides)
        return SolverConfig(**settings)
    return factory


@pytest.fixture
def write_csv(tmp_path):
    """Write a matrix as plain comma-separated text under tmp_path."""
    def writer(name, values):
        path = tmp_path / name
        rows = np.atleast_2d(values)
        path.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in rows) + "\n")
        return path
    return writer
