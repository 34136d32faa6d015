"""
Convergence test and result assembly shared by every solver.
"""

import logging
from typing import Optional

import numpy as np

from ..app_types import FitResult, FitState, MLMProblem
from ..core.objective import objective
from ..core.problem import as_coefficients, backtransform, coefficient_values
from ..errors import InvalidParameterError
from ..settings import Algorithm, SolverConfig

logger = logging.getLogger(__name__)


def converged(state: FitState, config: SolverConfig) -> bool:
    """
    Max absolute change of the primary iterate since the previous iteration
    is at most tol; ADMM also needs |r|_inf <= tol and |s|_inf <= tol * rho,
    i.e. the dual residual measured on the scale of B1.
    """
    if state.max_change > config.tol:
        return False
    if Algorithm(config.algorithm) is Algorithm.ADMM:
        rho = 1.0 if state.rho is None else state.rho
        return state.primal_residual <= config.tol and state.dual_residual <= config.tol * rho
    return True


def initial_coefficients(prob: MLMProblem, lam: float, B_init) -> np.ndarray:
    """Validate lambda and return a private copy of the warm start (zero by default)."""
    if lam < 0:
        raise InvalidParameterError(f"lambda must be nonnegative, got {lam}")
    if B_init is None:
        return np.zeros((prob.p, prob.q))
    return np.array(coefficient_values(prob, B_init), dtype=float)


def finish(
    prob: MLMProblem,
    lam: float,
    config: SolverConfig,
    state: FitState,
    values: np.ndarray,
    is_converged: bool,
    iterations: Optional[int] = None,
) -> FitResult:
    """Package the final iterate, logging a warning when max_iter ran out."""
    algorithm = Algorithm(config.algorithm).value
    iterations = state.k if iterations is None else iterations
    if not is_converged:
        logger.warning(
            "%s did not converge at lambda=%.6g after %d iterations (last change %.3g)",
            algorithm, lam, iterations, state.max_change,
        )
    B = as_coefficients(prob, values)
    result = FitResult(
        B=B,
        iterations=iterations,
        converged=is_converged,
        final_objective=objective(prob, B, lam),
        algorithm=algorithm,
        lam=float(lam),
        max_change=state.max_change,
        B_original=backtransform(prob, B) if prob.is_standardized else None,
        state=state if config.keep_state else None,
    )
    logger.debug(
        "%s lambda=%.6g iterations=%d converged=%s nnz=%d objective=%.10g",
        algorithm, lam, iterations, is_converged, B.nnz, result.final_objective,
    )
    return result
