import numpy as np
import pytest
from numpy.testing import assert_allclose

from sparsemlm.core.objective import gradient
from sparsemlm.core.oracle import (
    kkt_check,
    lasso_oracle,
    least_squares_oracle,
    unvec,
    vec,
    vectorized_design,
)
from sparsemlm.core.problem import build_problem
from sparsemlm.errors import InvalidParameterError, NumericalError, OracleSizeError
from sparsemlm.tuning import lambda_max


def test_vectorized_design_matches_bilinear_form(tiny_problem):
    B = np.random.default_rng(0).normal(size=(tiny_problem.p, tiny_problem.q))
    K = vectorized_design(tiny_problem)
    assert K.shape == (tiny_problem.n * tiny_problem.m, tiny_problem.p * tiny_problem.q)
    assert_allclose(K @ vec(B), vec(tiny_problem.X @ B @ tiny_problem.Z.T))
    assert_allclose(unvec(vec(B), B.shape), B)


def test_size_guard_raises_before_allocating():
    rng = np.random.default_rng(1)
    prob = build_problem(rng.normal(size=(80, 80)), rng.normal(size=(80, 2)), rng.normal(size=(80, 2)))
    with pytest.raises(OracleSizeError):
        vectorized_design(prob)


def test_lasso_oracle_at_zero_is_least_squares(tiny_problem):
    K = vectorized_design(tiny_problem)
    y = vec(tiny_problem.Y)
    beta = lasso_oracle(K, y, 0.0)
    assert_allclose(beta, np.linalg.lstsq(K, y, rcond=None)[0], atol=1e-7)


def test_lasso_oracle_matches_closed_form_least_squares(tiny_problem):
    K = vectorized_design(tiny_problem)
    beta = unvec(lasso_oracle(K, vec(tiny_problem.Y), 0.0), (tiny_problem.p, tiny_problem.q))
    assert_allclose(least_squares_oracle(tiny_problem).values, beta, atol=1e-7)


def test_lasso_oracle_rejects_negative_lambda(tiny_problem):
    with pytest.raises(InvalidParameterError):
        lasso_oracle(vectorized_design(tiny_problem), vec(tiny_problem.Y), -0.5)


def test_oracle_solution_passes_kkt(tiny_problem):
    lam = 0.4 * lambda_max(tiny_problem)
    beta = lasso_oracle(vectorized_design(tiny_problem), vec(tiny_problem.Y), lam, vec(tiny_problem.mask))
    B = unvec(beta, (tiny_problem.p, tiny_problem.q))
    report = kkt_check(tiny_problem, B, lam, tol=1e-6)
    assert report.ok
    assert report.violations == []
    assert report.max_residual <= 1e-6


def test_kkt_flags_each_kind(tiny_problem):
    lam = 1.0
    B = np.zeros((tiny_problem.p, tiny_problem.q))
    B[1, 1] = 5.0
    report = kkt_check(tiny_problem, B, lam, tol=1e-8)
    kinds = {(v.row, v.col): v.kind for v in report.violations}
    assert kinds[(1, 1)] == "support"
    assert kinds.get((0, 0)) == "unpenalized"
    G = gradient(tiny_problem, B)
    assert report.residuals[1, 1] == pytest.approx(abs(G[1, 1] + lam))
    assert report.residuals[0, 0] == pytest.approx(abs(G[0, 0]))
    assert not report.ok


def test_kkt_zero_entry_residual_is_excess_gradient(tiny_problem):
    B = np.zeros((tiny_problem.p, tiny_problem.q))
    G = gradient(tiny_problem, B)
    lam = 0.5 * np.abs(G[tiny_problem.mask]).max()
    report = kkt_check(tiny_problem, B, lam)
    expected = np.maximum(np.abs(G) - lam, 0.0)
    assert_allclose(report.residuals[tiny_problem.mask], expected[tiny_problem.mask])
    assert any(v.kind == "zero" for v in report.violations)


def test_least_squares_oracle_matches_normal_equations(tiny_problem):
    K = vectorized_design(tiny_problem)
    beta = np.linalg.solve(K.T @ K, K.T @ vec(tiny_problem.Y))
    assert_allclose(least_squares_oracle(tiny_problem).values, unvec(beta, (3, 3)), atol=1e-9)


def test_least_squares_oracle_singular_design_raises():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(5, 1))
    prob = build_problem(rng.normal(size=(5, 3)), np.hstack([x, x]), rng.normal(size=(3, 1)), standardize=False)
    with pytest.raises(NumericalError):
        least_squares_oracle(prob)
