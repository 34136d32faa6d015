import numpy as np
import pytest
from numpy.testing import assert_allclose

from sparsemlm.core.objective import (
    build_spectral_cache,
    extreme_eigenvalues,
    gradient,
    lipschitz_step,
    loss,
    objective,
    penalty,
    prox_f_direct,
    prox_f_spectral,
    soft_threshold,
    soft_threshold_matrix,
)
from sparsemlm.core.oracle import unvec, vec, vectorized_design
from sparsemlm.errors import InvalidParameterError


def test_loss_matches_vectorized_form(make_problem):
    prob = make_problem(n=3, m=3, p_raw=2, q_raw=2, seed=11)
    B = np.random.default_rng(11).normal(size=(prob.p, prob.q))
    direct = 0.5 * np.sum((vec(prob.Y) - vectorized_design(prob) @ vec(B)) ** 2)
    assert loss(prob, B) == pytest.approx(direct, rel=1e-12)


def test_zero_coefficients_give_half_squared_norm(tiny_problem):
    assert loss(tiny_problem, np.zeros((3, 3))) == pytest.approx(0.5 * np.sum(tiny_problem.Y ** 2))


def test_objective_penalizes_only_masked_entries(tiny_problem):
    B = np.ones((3, 3))
    assert penalty(B, 2.0, tiny_problem.mask) == pytest.approx(2.0 * 4)
    assert objective(tiny_problem, B, 2.0) == pytest.approx(loss(tiny_problem, B) + 8.0)
    full = np.ones((3, 3), dtype=bool)
    assert objective(tiny_problem, B, 2.0, mask=full) == pytest.approx(loss(tiny_problem, B) + 18.0)


def test_objective_rejects_negative_lambda(tiny_problem):
    with pytest.raises(InvalidParameterError):
        objective(tiny_problem, np.zeros((3, 3)), -1.0)


@pytest.mark.parametrize("seed", range(20))
def test_gradient_matches_central_differences(make_problem, seed):
    prob = make_problem(n=4, m=3, p_raw=1, q_raw=1, seed=seed)
    B = np.random.default_rng(seed + 100).normal(size=(prob.p, prob.q))
    G = gradient(prob, B)
    h = 1e-6
    numeric = np.zeros_like(B)
    for i in range(prob.p):
        for j in range(prob.q):
            step = np.zeros_like(B)
            step[i, j] = h
            numeric[i, j] = (loss(prob, B + step) - loss(prob, B - step)) / (2 * h)
    scale = np.abs(G).max()
    assert np.max(np.abs(G - numeric)) / scale <= 1e-4


def test_soft_threshold_scalar_and_array():
    assert soft_threshold(3.0, 1.0) == 2.0
    assert soft_threshold(-3.0, 1.0) == -2.0
    assert soft_threshold(0.5, 1.0) == 0.0
    assert soft_threshold(-1.0, 1.0) == 0.0
    assert_allclose(soft_threshold(np.array([-2.5, 0.0, 0.2, 4.0]), 0.5), [-2.0, 0.0, 0.0, 3.5])
    with pytest.raises(InvalidParameterError):
        soft_threshold(1.0, -0.1)


def test_soft_threshold_is_a_contraction():
    rng = np.random.default_rng(21)
    for _ in range(200):
        u, v = rng.normal(0.0, 3.0, size=(2, 50))
        rho = float(rng.exponential(1.0))
        assert np.all(np.abs(soft_threshold(u, rho) - soft_threshold(v, rho)) <= np.abs(u - v) + 1e-15)


def test_soft_threshold_matrix_passes_unmasked_entries():
    U = np.array([[0.3, -0.3], [2.0, -2.0]])
    mask = np.array([[False, True], [True, False]])
    assert_allclose(soft_threshold_matrix(U, 0.5, mask), [[0.3, 0.0], [1.5, -2.0]])


def test_lipschitz_step_uses_gram_eigenvalues(tiny_problem):
    top_x = np.linalg.eigvalsh(tiny_problem.X.T @ tiny_problem.X).max()
    top_z = np.linalg.eigvalsh(tiny_problem.Z.T @ tiny_problem.Z).max()
    assert lipschitz_step(tiny_problem) == pytest.approx(1.0 / (2 * top_x * top_z))
    K = vectorized_design(tiny_problem)
    assert lipschitz_step(tiny_problem) <= 1.0 / np.linalg.eigvalsh(K.T @ K).max()


def test_spectral_cache_reconstructs_grams(tiny_problem):
    cache = build_spectral_cache(tiny_problem)
    assert_allclose(cache.Q_X @ np.diag(cache.eig_X) @ cache.Q_X.T, tiny_problem.X.T @ tiny_problem.X, atol=1e-9)
    assert_allclose(cache.L, np.outer(cache.eig_X, cache.eig_Z))
    low, high = extreme_eigenvalues(cache)
    K = vectorized_design(tiny_problem)
    spectrum = np.linalg.eigvalsh(K.T @ K)
    assert low == pytest.approx(spectrum.min(), rel=1e-8)
    assert high == pytest.approx(spectrum.max(), rel=1e-8)


def test_spectral_cache_clamps_tiny_eigenvalues():
    from sparsemlm.core.problem import build_problem

    rng = np.random.default_rng(7)
    x = rng.normal(size=(5, 1))
    prob = build_problem(rng.normal(size=(5, 3)), np.hstack([x, x]), rng.normal(size=(3, 1)), standardize=False)
    cache = build_spectral_cache(prob)
    assert cache.eig_X.min() == 0.0


@pytest.mark.parametrize("seed", range(20))
def test_prox_spectral_matches_direct(make_problem, seed):
    prob = make_problem(n=3, m=3, p_raw=1, q_raw=1, seed=seed)
    rng = np.random.default_rng(seed + 50)
    U = rng.normal(size=(prob.p, prob.q))
    rho = float(rng.uniform(0.1, 10.0))
    spectral = prox_f_spectral(U, rho, build_spectral_cache(prob))
    direct = unvec(prox_f_direct(vec(U), rho, vectorized_design(prob), vec(prob.Y)), U.shape)
    assert_allclose(spectral, direct, atol=1e-8)


def test_prox_spectral_is_stationary(make_problem):
    prob = make_problem(n=7, m=6, p_raw=3, q_raw=2, seed=9)
    U = np.random.default_rng(9).normal(size=(prob.p, prob.q))
    rho = 2.5
    P = prox_f_spectral(U, rho, build_spectral_cache(prob))
    assert_allclose(rho * (P - U) + gradient(prob, P), 0.0, atol=1e-6)


def test_prox_rejects_nonpositive_rho(tiny_problem):
    cache = build_spectral_cache(tiny_problem)
    with pytest.raises(InvalidParameterError):
        prox_f_spectral(np.zeros((3, 3)), 0.0, cache)
    with pytest.raises(InvalidParameterError):
        prox_f_direct(np.zeros(9), -1.0, vectorized_design(tiny_problem), vec(tiny_problem.Y))
