"""
ADMM with the spectral proximal operator and residual-balancing rho.
"""

import logging
from typing import Optional

import numpy as np

from ..app_types import FitResult, FitState, MLMProblem, SpectralCache
from ..core.objective import (
    build_spectral_cache,
    extreme_eigenvalues,
    prox_f_spectral,
    soft_threshold_matrix,
)
from ..core.problem import Coefficients
from ..errors import NumericalError
from ..settings import SolverConfig
from .convergence import converged, finish, initial_coefficients

logger = logging.getLogger(__name__)


def initial_rho(lam: float, cache: SpectralCache) -> float:
    """
    Three-case rule on the spectrum of (Z kron X)'(Z kron X):
    lambda below the smallest eigenvalue -> that eigenvalue; lambda above the
    largest -> lambda; otherwise the largest eigenvalue.
    """
    low, high = extreme_eigenvalues(cache)
    if high <= 0:
        raise NumericalError("design matrices are identically zero; cannot initialize rho")
    if lam < low:
        return low
    if lam > high:
        return lam
    return high


def fit_admm(
    prob: MLMProblem,
    lam: float,
    config: SolverConfig,
    B_init: Optional[Coefficients] = None,
    cache: Optional[SpectralCache] = None,
) -> FitResult:
    """
    Alternate the loss prox, the L1 prox and a scaled dual update:

        B0 <- prox_f(B1 - B2), B1 <- S_{lam/rho}(B0 + B2), B2 <- B2 + B0 - B1

    r = B0 - B1 is the primal residual and the dual residual s = rho (B1_prev - B1)
    is recorded in state. Balancing and the stopping test compare |r| with the
    unscaled change d = B1_prev - B1, so both sides are in coefficient units
    whatever the size of rho: rho is multiplied by tau_incr when |r| > mu |d|
    and divided by tau_decr when |d| > mu |r| (Frobenius norms), rescaling the
    scaled dual B2 by the inverse factor. A rho change only alters the
    elementwise divisor of the prox; the eigendecompositions are reused.

    Args:
        prob: Problem to fit
        lam: Penalty (>= 0)
        config: Solver settings
        B_init: Warm start for B1, zero matrix when None
        cache: Precomputed spectral cache for prob (built when None)

    Returns:
        FitResult holding B1
    """
    B1 = initial_coefficients(prob, lam, B_init)
    cache = build_spectral_cache(prob) if cache is None else cache
    rho = config.rho if config.rho is not None else initial_rho(lam, cache)
    mask = prob.mask
    state = FitState(
        B_hat=B1,
        B_prev=B1.copy(),
        B0=B1.copy(),
        B1=B1,
        B2=np.zeros_like(B1),
        rho=rho,
    )
    is_converged = False
    while state.k < config.max_iter:
        B1_prev = state.B1
        state.B0 = prox_f_spectral(state.B1 - state.B2, state.rho, cache)
        state.B1 = soft_threshold_matrix(state.B0 + state.B2, lam / state.rho, mask)
        state.B2 = state.B2 + state.B0 - state.B1
        state.B_prev, state.B_hat = B1_prev, state.B1
        state.k += 1

        r = state.B0 - state.B1
        change = B1_prev - state.B1
        state.primal_residual = float(np.max(np.abs(r), initial=0.0))
        state.dual_residual = state.rho * float(np.max(np.abs(change), initial=0.0))
        if converged(state, config):
            is_converged = True
            break

        if config.adaptive_rho:
            r_norm = np.linalg.norm(r)
            s_norm = np.linalg.norm(change)
            if r_norm > config.mu * s_norm:
                state.rho *= config.tau_incr
                state.B2 = state.B2 / config.tau_incr
            elif s_norm > config.mu * r_norm:
                state.rho /= config.tau_decr
                state.B2 = state.B2 * config.tau_decr
    logger.debug("admm finished with rho %.6g", state.rho)
    return finish(prob, lam, config, state, state.B1.copy(), is_converged)
