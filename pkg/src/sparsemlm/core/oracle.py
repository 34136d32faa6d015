"""
Reference computations for checking the matrix solvers on tiny problems:
the explicit Kronecker design, a vectorized lasso, KKT diagnostics and the
closed-form least-squares fit.
"""

import logging
from typing import List, Optional

import numpy as np
from scipy import linalg

from ..app_types import CoefficientMatrix, KKTReport, KKTViolation, MLMProblem
from ..constants import ORACLE_MAX_ELEMENTS, ORACLE_MAX_ROWS, ORACLE_MAX_SWEEPS, ORACLE_TOL
from ..errors import InvalidParameterError, NumericalError, OracleSizeError
from .objective import gradient, soft_threshold
from .problem import Coefficients, as_coefficients, coefficient_values

logger = logging.getLogger(__name__)


def _check_size(rows: int, cols: int) -> None:
    if rows > ORACLE_MAX_ROWS or rows * cols > ORACLE_MAX_ELEMENTS:
        raise OracleSizeError(
            f"explicit Kronecker design of {rows}x{cols} exceeds the oracle guard "
            f"({ORACLE_MAX_ROWS} rows, {ORACLE_MAX_ELEMENTS} elements)"
        )


def vectorized_design(prob: MLMProblem) -> np.ndarray:
    """
    Z kron X, ordered so that (Z kron X) vec(B) = vec(XBZ') with column-stacking vec.

    Raises:
        OracleSizeError: n*m or n*m*p*q exceeds the guard; checked before allocating
    """
    _check_size(prob.n * prob.m, prob.p * prob.q)
    return np.kron(prob.Z, prob.X)


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(matrix).ravel(order="F")


def unvec(vector: np.ndarray, shape) -> np.ndarray:
    return np.asarray(vector).reshape(shape, order="F")


def lasso_oracle(
    design: np.ndarray,
    y: np.ndarray,
    lam: float,
    mask_vec: Optional[np.ndarray] = None,
    tol: float = ORACLE_TOL,
    max_sweeps: int = ORACLE_MAX_SWEEPS,
) -> np.ndarray:
    """
    Plain univariate lasso by cyclic coordinate descent on an explicit design.

    Args:
        design: N x K design
        y: length-N response
        lam: Penalty (>= 0)
        mask_vec: Length-K flags, True where the coefficient is penalized
        tol: Stop when a sweep changes no coefficient by more than tol

    Returns:
        Length-K coefficient vector
    """
    if lam < 0:
        raise InvalidParameterError(f"lambda must be nonnegative, got {lam}")
    design = np.asarray(design, dtype=float)
    _check_size(*design.shape)
    y = np.asarray(y, dtype=float)
    n_coef = design.shape[1]
    mask_vec = np.ones(n_coef, dtype=bool) if mask_vec is None else np.asarray(mask_vec, dtype=bool)
    beta = np.zeros(n_coef)
    resid = y.copy()
    curvature = (design ** 2).sum(axis=0)
    for sweep in range(max_sweeps):
        change = 0.0
        for k in range(n_coef):
            if curvature[k] == 0.0:
                continue
            target = curvature[k] * beta[k] + design[:, k] @ resid
            if mask_vec[k]:
                target = soft_threshold(target, lam)
            new = target / curvature[k]
            delta = new - beta[k]
            if delta != 0.0:
                resid -= delta * design[:, k]
                beta[k] = new
                change = max(change, abs(delta))
        if change <= tol:
            logger.debug("lasso oracle converged after %d sweeps", sweep + 1)
            return beta
    logger.warning("lasso oracle hit %d sweeps without reaching tol %.1e", max_sweeps, tol)
    return beta


def kkt_check(
    prob: MLMProblem,
    B: Coefficients,
    lam: float,
    mask: Optional[np.ndarray] = None,
    tol: float = 1e-6,
) -> KKTReport:
    """
    Entrywise first-order optimality of B for the penalized objective.

    Penalized nonzero entries need grad_ij = -lam * sign(B_ij); penalized zero
    entries need |grad_ij| <= lam; unpenalized entries need grad_ij = 0. Each
    condition is reported as a residual and flagged when it exceeds tol.
    """
    values = coefficient_values(prob, B)
    mask = prob.mask if mask is None else np.asarray(mask, dtype=bool)
    G = gradient(prob, values)
    nonzero = values != 0
    residual = np.where(
        mask & nonzero,
        np.abs(G + lam * np.sign(values)),
        np.where(mask, np.maximum(np.abs(G) - lam, 0.0), np.abs(G)),
    )
    kinds = np.where(mask & nonzero, "support", np.where(mask, "zero", "unpenalized"))
    violations: List[KKTViolation] = [
        KKTViolation(row=int(i), col=int(j), kind=str(kinds[i, j]), residual=float(residual[i, j]))
        for i, j in np.argwhere(residual > tol)
    ]
    return KKTReport(lam=float(lam), tol=float(tol), residuals=residual, violations=violations)


def least_squares_oracle(prob: MLMProblem) -> CoefficientMatrix:
    """
    Unpenalized fit (X'X)^{-1} X'YZ (Z'Z)^{-1}.

    Raises:
        NumericalError: X'X or Z'Z is singular
    """
    XtX = prob.X.T @ prob.X
    ZtZ = prob.Z.T @ prob.Z
    for name, gram in (("X'X", XtX), ("Z'Z", ZtZ)):
        if np.linalg.matrix_rank(gram) < gram.shape[0]:
            raise NumericalError(f"{name} is singular; least squares is not identifiable")
    XtYZ = np.linalg.multi_dot([prob.X.T, prob.Y, prob.Z])
    left = linalg.solve(XtX, XtYZ, assume_a="pos")
    return as_coefficients(prob, linalg.solve(ZtZ, left.T, assume_a="pos").T)
