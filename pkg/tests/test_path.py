import numpy as np
import pytest
from numpy.testing import assert_allclose

from sparsemlm.app_types import LambdaPath, SimSpec
from sparsemlm.core.oracle import kkt_check
from sparsemlm.core.problem import build_problem
from sparsemlm.errors import DataError
from sparsemlm.settings import SolverConfig
from sparsemlm.sim import simulate_mlm
from sparsemlm.tuning import default_lambda_path, fit_path, lambda_for_sparsity, lambda_max


def test_lambda_max_without_intercepts_is_top_cross_product(make_problem):
    prob = make_problem(intercept_x=False, intercept_z=False)
    expected = np.abs(prob.X.T @ prob.Y @ prob.Z).max()
    assert lambda_max(prob) == pytest.approx(expected, rel=1e-5)


def test_lambda_max_needs_penalized_entries():
    rng = np.random.default_rng(0)
    prob = build_problem(rng.normal(size=(4, 3)), np.zeros((4, 0)), np.zeros((3, 0)), standardize=False)
    with pytest.raises(DataError):
        lambda_max(prob)


def test_default_path_is_log_spaced(tiny_problem):
    path = default_lambda_path(tiny_problem, n_lambda=5, lambda_min_ratio=1e-2)
    top = lambda_max(tiny_problem)
    assert len(path) == 5
    assert path.lambdas[0] == pytest.approx(top)
    assert path.lambdas[-1] == pytest.approx(top * 1e-2)
    assert_allclose(np.diff(np.log(path.lambdas)), np.log(1e-2) / 4)


def test_single_lambda_path(tiny_problem):
    path = default_lambda_path(tiny_problem, n_lambda=1)
    assert path.lambdas.tolist() == [lambda_max(tiny_problem)]


def test_path_arguments_are_validated(tiny_problem):
    with pytest.raises(ValueError):
        default_lambda_path(tiny_problem, n_lambda=0)
    with pytest.raises(ValueError):
        default_lambda_path(tiny_problem, lambda_min_ratio=1.5)
    with pytest.raises(ValueError):
        LambdaPath(lambdas=np.array([1.0, 2.0]), n_lambda=2, lambda_min_ratio=0.5)
    with pytest.raises(ValueError):
        LambdaPath(lambdas=np.array([1.0, -1.0]), n_lambda=2, lambda_min_ratio=0.5)


@pytest.mark.parametrize("algorithm", ["cd_cyclic", "fista_backtrack", "admm"])
def test_path_starts_empty_and_every_fit_passes_kkt(algorithm, make_problem, tight):
    prob = make_problem(n=9, m=8, p_raw=3, q_raw=2, seed=2)
    path = default_lambda_path(prob, n_lambda=8, lambda_min_ratio=0.05)
    path_fit = fit_path(prob, path, tight(algorithm))
    assert path_fit.nnz_per_lambda[0] == 0
    assert path_fit.nnz_per_lambda[-1] > 0
    assert path_fit.all_converged
    for lam, result in zip(path.lambdas, path_fit.fits):
        assert result.lam == pytest.approx(lam)
        assert kkt_check(prob, result.B, lam, tol=1e-6).ok


def test_plain_sequence_is_accepted(tiny_problem, tight):
    top = lambda_max(tiny_problem)
    path_fit = fit_path(tiny_problem, [top, top / 2, top / 4], tight("cd_cyclic"))
    assert len(path_fit.fits) == 3
    assert_allclose(path_fit.lambdas, [top, top / 2, top / 4])


def test_warm_start_needs_fewer_iterations():
    prob = simulate_mlm(SimSpec(n=60, m=50, p=8, q=6, seed=3, standardize=True)).prob
    path = default_lambda_path(prob, n_lambda=15)
    config = SolverConfig(algorithm="cd_cyclic")
    warm = fit_path(prob, path, config)
    cold = fit_path(prob, path, config, warm_start=False)
    assert warm.warm_started and not cold.warm_started
    assert warm.total_iterations < cold.total_iterations
    for w, c in zip(warm.fits, cold.fits):
        assert_allclose(w.B.values, c.B.values, atol=1e-4)


@pytest.mark.parametrize("seed", range(3))
def test_warm_started_path_has_no_jumps(seed):
    prob = simulate_mlm(SimSpec(n=50, m=40, p=6, q=5, seed=seed, standardize=True)).prob
    path = default_lambda_path(prob, n_lambda=30, lambda_min_ratio=0.05)
    path_fit = fit_path(prob, path, SolverConfig(algorithm="cd_cyclic", tol=1e-10))
    values = np.stack([result.B.values for result in path_fit.fits])
    jumps = np.linalg.norm(np.diff(values, axis=0), axis=(1, 2))
    moving = jumps[jumps > 0]
    assert len(moving) > len(jumps) // 2
    assert jumps.max() <= 100 * np.median(moving)


def test_lambda_for_sparsity(make_problem, tight):
    prob = make_problem(n=9, m=8, p_raw=3, q_raw=3, seed=4)
    path_fit = fit_path(prob, default_lambda_path(prob, n_lambda=10), tight("cd_cyclic"))
    lam, index = lambda_for_sparsity(path_fit, 0.0)
    assert index == 0 and lam == path_fit.lambdas[0]
    shares = path_fit.nnz_per_lambda / prob.penalty.n_penalized
    target = shares[shares > 0].min()
    lam, index = lambda_for_sparsity(path_fit, target)
    assert shares[index] >= target
    assert np.all(shares[:index] < target)
    with pytest.raises(ValueError):
        lambda_for_sparsity(path_fit, 1.5)
