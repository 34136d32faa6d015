"""
ISTA and FISTA (fixed step and backtracking line search).
"""

import logging
from typing import Optional, Tuple

import numpy as np

from ..app_types import FitResult, FitState, MLMProblem
from ..constants import MIN_BACKTRACK_STEP
from ..core.objective import gradient_from_residuals, lipschitz_step, soft_threshold_matrix
from ..core.problem import Coefficients, residuals
from ..errors import NumericalError
from ..settings import SolverConfig
from .convergence import converged, finish, initial_coefficients

logger = logging.getLogger(__name__)


def momentum(k: int) -> float:
    """Extrapolation weight (k-1)/(k+2) for iteration k >= 1."""
    return (k - 1) / (k + 2)


def majorization_holds(prob: MLMProblem, D: np.ndarray, step: float) -> Tuple[bool, np.ndarray]:
    """
    Backtracking criterion for a candidate B = A + D.

    f(B) <= f(A) + <D, grad f(A)> + |D|^2 / (2 step) is equivalent, for this
    quadratic loss, to |X D Z'|^2 <= |D|^2 / step; the right-hand form has
    no cancellation. Returns the flag and X D Z' for reuse.
    """
    E = np.linalg.multi_dot([prob.X, D, prob.Z.T])
    return float(np.vdot(E, E)) <= float(np.vdot(D, D)) / step, E


def fit_ista(
    prob: MLMProblem,
    lam: float,
    config: SolverConfig,
    B_init: Optional[Coefficients] = None,
) -> FitResult:
    """Update every coefficient at once: B <- S_{step*lam}(B - step * grad f(B))."""
    B = initial_coefficients(prob, lam, B_init)
    step = lipschitz_step(prob)
    mask = prob.mask
    state = FitState(B_hat=B, B_prev=B.copy(), step=step)
    is_converged = False
    while state.k < config.max_iter:
        state.R = residuals(prob, B)
        G = gradient_from_residuals(prob, state.R)
        B_new = soft_threshold_matrix(B - step * G, step * lam, mask)
        state.B_prev, state.B_hat = B, B_new
        state.k += 1
        B = B_new
        if converged(state, config):
            is_converged = True
            break
    return finish(prob, lam, config, state, B, is_converged)


def extrapolate(state: FitState, B: np.ndarray, B_new: np.ndarray, restart: bool) -> None:
    """
    Commit B_new and set A = B_new + (t-1)/(t+2) (B_new - B).

    t counts iterations since the last restart; without restarts it equals k.
    A restart happens when the prox-gradient step B_new - A points against
    the momentum direction B_new - B, and makes the next step a plain
    proximal gradient step from B_new.
    """
    if restart and float(np.vdot(state.A - B_new, B_new - B)) > 0.0:
        state.momentum_k = 0
        logger.debug("momentum restart at iteration %d", state.k + 1)
    state.B_prev, state.B_hat = B, B_new
    state.k += 1
    state.momentum_k += 1
    state.A = B_new + momentum(state.momentum_k) * (B_new - B)


def fit_fista_fixed(
    prob: MLMProblem,
    lam: float,
    config: SolverConfig,
    B_init: Optional[Coefficients] = None,
) -> FitResult:
    """
    FISTA with the fixed Lipschitz step; the gradient is taken at the
    extrapolated point A (see extrapolate).
    """
    B = initial_coefficients(prob, lam, B_init)
    step = lipschitz_step(prob)
    mask = prob.mask
    state = FitState(B_hat=B, B_prev=B.copy(), A=B.copy(), step=step)
    is_converged = False
    while state.k < config.max_iter:
        state.R = residuals(prob, state.A)
        G = gradient_from_residuals(prob, state.R)
        B_new = soft_threshold_matrix(state.A - step * G, step * lam, mask)
        extrapolate(state, B, B_new, config.restart)
        B = B_new
        if converged(state, config):
            is_converged = True
            break
    return finish(prob, lam, config, state, B, is_converged)


def fit_fista_backtrack(
    prob: MLMProblem,
    lam: float,
    config: SolverConfig,
    B_init: Optional[Coefficients] = None,
) -> FitResult:
    """
    FISTA with a backtracking line search.

    Starting from config.init_step, the step is multiplied by gamma until the
    quadratic majorization holds at the thresholded candidate; the step is
    carried over between iterations and never grows.

    Raises:
        NumericalError: the step fell below MIN_BACKTRACK_STEP
    """
    B = initial_coefficients(prob, lam, B_init)
    step = config.init_step
    mask = prob.mask
    state = FitState(B_hat=B, B_prev=B.copy(), A=B.copy(), step=step)
    R_A = residuals(prob, state.A)
    is_converged = False
    while state.k < config.max_iter:
        G = gradient_from_residuals(prob, R_A)
        while True:
            candidate = soft_threshold_matrix(state.A - step * G, step * lam, mask)
            accepted, _ = majorization_holds(prob, candidate - state.A, step)
            if accepted:
                break
            step *= config.gamma
            if step < MIN_BACKTRACK_STEP:
                raise NumericalError(
                    f"backtracking step underflow ({step:.3g}) at lambda={lam:.6g}, "
                    f"iteration {state.k}; check the design scaling"
                )
        state.step = step
        extrapolate(state, B, candidate, config.restart)
        B = candidate
        R_A = residuals(prob, state.A)
        state.R = R_A
        if converged(state, config):
            is_converged = True
            break
    logger.debug("backtracking finished with step %.6g", step)
    return finish(prob, lam, config, state, B, is_converged)
