"""
Loss, penalty, gradient, soft-thresholding and proximal operators.
"""

from typing import Optional, Tuple, Union

import numpy as np
from scipy import linalg

from ..app_types import MLMProblem, SpectralCache
from ..constants import EIGEN_CLAMP
from ..errors import InvalidParameterError, NumericalError
from .problem import Coefficients, coefficient_values, residuals


def loss(prob: MLMProblem, B: Coefficients) -> float:
    """Half the squared Frobenius norm of Y - XBZ'."""
    R = residuals(prob, B)
    return 0.5 * float(np.vdot(R, R))


def penalty(B: Coefficients, lam: float, mask: np.ndarray) -> float:
    values = B.values if hasattr(B, "values") else np.asarray(B)
    return lam * float(np.abs(values[mask]).sum())


def objective(prob: MLMProblem, B: Coefficients, lam: float, mask: Optional[np.ndarray] = None) -> float:
    """Loss plus lambda times the L1 norm of the penalized entries."""
    if lam < 0:
        raise InvalidParameterError(f"lambda must be nonnegative, got {lam}")
    mask = prob.mask if mask is None else mask
    return loss(prob, B) + penalty(coefficient_values(prob, B), lam, mask)


def gradient_from_residuals(prob: MLMProblem, R: np.ndarray) -> np.ndarray:
    return -np.linalg.multi_dot([prob.X.T, R, prob.Z])


def gradient(prob: MLMProblem, B: Coefficients) -> np.ndarray:
    """-X' R Z with R = Y - XBZ'; entry (i, j) is the partial derivative in B_ij."""
    return gradient_from_residuals(prob, residuals(prob, B))


def soft_threshold(u: Union[float, np.ndarray], rho: float) -> Union[float, np.ndarray]:
    """
    S_rho(u): shrink toward zero by rho, truncating at zero.

    Works on scalars and arrays alike.
    """
    if rho < 0:
        raise InvalidParameterError(f"threshold must be nonnegative, got {rho}")
    shrunk = np.sign(u) * np.maximum(np.abs(u) - rho, 0.0)
    if np.ndim(shrunk) == 0:
        return float(shrunk)
    return shrunk


def soft_threshold_matrix(U: np.ndarray, rho: float, mask: np.ndarray) -> np.ndarray:
    """Elementwise S_rho on masked entries; unmasked entries pass through."""
    return np.where(mask, soft_threshold(U, rho), U)


def gram_eigenvalues(design: np.ndarray) -> np.ndarray:
    return linalg.eigvalsh(design.T @ design)


def lipschitz_step(prob: MLMProblem) -> float:
    """
    Fixed step for ISTA/FISTA: 1 / (2 * lmax(X'X) * lmax(Z'Z)).

    The largest eigenvalue of (Z kron X)'(Z kron X) is the product of the
    largest eigenvalues of X'X and Z'Z, so only the small Gram matrices are
    decomposed. The factor 2 is conservative for this loss; any smaller step
    is still safe.
    """
    top = float(gram_eigenvalues(prob.X)[-1]) * float(gram_eigenvalues(prob.Z)[-1])
    if top <= 0:
        raise NumericalError("design matrices are identically zero; no Lipschitz step exists")
    return 1.0 / (2.0 * top)


def _clamped_eigh(gram: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    eig, Q = linalg.eigh(gram)
    eig = np.where(eig < EIGEN_CLAMP, 0.0, eig)
    return eig, Q


def build_spectral_cache(prob: MLMProblem) -> SpectralCache:
    """Decompose X'X and Z'Z once and precompute Y* = Q_X' X' Y Z Q_Z."""
    eig_X, Q_X = _clamped_eigh(prob.X.T @ prob.X)
    eig_Z, Q_Z = _clamped_eigh(prob.Z.T @ prob.Z)
    Ystar = np.linalg.multi_dot([Q_X.T, prob.X.T, prob.Y, prob.Z, Q_Z])
    cache = SpectralCache(
        Q_X=Q_X,
        eig_X=eig_X,
        Q_Z=Q_Z,
        eig_Z=eig_Z,
        Ystar=Ystar,
        L=np.outer(eig_X, eig_Z),
    )
    for array in (cache.Q_X, cache.eig_X, cache.Q_Z, cache.eig_Z, cache.Ystar, cache.L):
        array.setflags(write=False)
    return cache


def extreme_eigenvalues(cache: SpectralCache) -> Tuple[float, float]:
    """(min, max) eigenvalue of (Z kron X)'(Z kron X) from the factor spectra."""
    low = float(cache.eig_X.min() * cache.eig_Z.min())
    high = float(cache.eig_X.max() * cache.eig_Z.max())
    return low, high


def prox_f_direct(u_vec: np.ndarray, rho: float, Xk: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    (rho I + Xk'Xk)^{-1} (rho u + Xk'y) by a dense solve.

    Only meant for tiny vectorized problems used as a reference.
    """
    if rho <= 0:
        raise InvalidParameterError(f"rho must be positive, got {rho}")
    system = rho * np.eye(Xk.shape[1]) + Xk.T @ Xk
    try:
        return linalg.solve(system, rho * np.asarray(u_vec, dtype=float) + Xk.T @ y, assume_a="pos")
    except linalg.LinAlgError as exc:
        raise NumericalError(f"proximal system is singular: {exc}") from exc


def prox_f_spectral(U: np.ndarray, rho: float, cache: SpectralCache) -> np.ndarray:
    """
    Matrix-form prox of the loss: Q_X [(rho Q_X' U Q_Z + Y*) ./ (rho + L)] Q_Z'.

    Only p x p and q x q products plus an elementwise division; the Kronecker
    structure survives as the outer-product layout of L.
    """
    if rho <= 0:
        raise InvalidParameterError(f"rho must be positive, got {rho}")
    rotated = np.linalg.multi_dot([cache.Q_X.T, U, cache.Q_Z])
    return np.linalg.multi_dot([cache.Q_X, (rho * rotated + cache.Ystar) / (rho + cache.L), cache.Q_Z.T])
