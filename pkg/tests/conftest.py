import numpy as np
import pytest

from mngap import GridFn, ModelParams, SolveConfig, make_grid, solve_A


@pytest.fixture(scope="session")
def std_params():
    """The workhorse parameter set: strong coupling, cutoff condition met."""
    return ModelParams(lam=3.0, eps=1.0, big_lambda=100.0)


@pytest.fixture(scope="session")
def std_grid(std_params):
    return make_grid(std_params.eps, std_params.big_lambda, 2048, "log")


@pytest.fixture(scope="session")
def std_solve(std_params):
    """Converged fixed point at lam=3, eps=1, Lambda=100, n=2048."""
    report = solve_A(std_params, SolveConfig(tol=1e-10, grid_n=2048))
    assert report.converged
    return report


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def constant(grid, c):
    return GridFn.constant(grid, c)
