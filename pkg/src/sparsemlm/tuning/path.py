"""
Lambda sequences and warm-started regularization paths.
"""

import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..app_types import LambdaPath, MLMProblem, PathFit
from ..constants import (
    DEFAULT_LAMBDA_MIN_RATIO,
    DEFAULT_N_LAMBDA,
    LAMBDA_MAX_MARGIN,
    UNPENALIZED_FIT_MAX_SWEEPS,
    UNPENALIZED_FIT_TOL,
)
from ..core.objective import build_spectral_cache, gradient_from_residuals
from ..core.problem import residuals
from ..errors import DataError, NumericalError
from ..settings import Algorithm, SolverConfig
from ..solvers import SOLVERS, fit_admm
from ..solvers.coordinate_descent import CoordinateSweeper, coordinate_list

logger = logging.getLogger(__name__)


def unpenalized_fit(prob: MLMProblem) -> np.ndarray:
    """
    Least-squares fit of the unpenalized (intercept) entries with every
    penalized entry held at zero.
    """
    B = np.zeros((prob.p, prob.q))
    coords = coordinate_list(~prob.mask)
    if not coords:
        return B
    sweeper = CoordinateSweeper(prob, B, lam=0.0)
    for _ in range(UNPENALIZED_FIT_MAX_SWEEPS):
        change = sweeper.sweep(coords)
        if change <= UNPENALIZED_FIT_TOL * max(1.0, float(np.abs(B).max())):
            break
    else:
        logger.warning("unpenalized fit did not settle within %d sweeps", UNPENALIZED_FIT_MAX_SWEEPS)
    return B


def lambda_max(prob: MLMProblem) -> float:
    """
    Smallest penalty at which every penalized coefficient is zero at the optimum:
    the largest penalized gradient magnitude at the intercept-only fit, nudged up
    by a relative margin so round-off cannot leave an entry just above threshold.
    """
    if prob.penalty.n_penalized == 0:
        raise DataError("every coefficient is unpenalized; there is nothing to put on a path")
    B = unpenalized_fit(prob)
    G = gradient_from_residuals(prob, residuals(prob, B))
    top = float(np.abs(G[prob.mask]).max())
    if top <= 0:
        raise NumericalError("the intercept-only fit already has zero penalized gradient")
    return top * (1.0 + LAMBDA_MAX_MARGIN)


def default_lambda_path(
    prob: MLMProblem,
    n_lambda: int = DEFAULT_N_LAMBDA,
    lambda_min_ratio: float = DEFAULT_LAMBDA_MIN_RATIO,
) -> LambdaPath:
    """Log-spaced path from lambda_max down to lambda_max * lambda_min_ratio."""
    if n_lambda < 1:
        raise ValueError(f"n_lambda must be at least 1, got {n_lambda}")
    if not 0 < lambda_min_ratio < 1:
        raise ValueError(f"lambda_min_ratio must lie in (0, 1), got {lambda_min_ratio}")
    top = lambda_max(prob)
    lambdas = top * np.logspace(0.0, np.log10(lambda_min_ratio), n_lambda) if n_lambda > 1 else np.array([top])
    return LambdaPath(lambdas=lambdas, n_lambda=n_lambda, lambda_min_ratio=lambda_min_ratio)


def as_lambda_path(path: Union[LambdaPath, Sequence[float]]) -> LambdaPath:
    if isinstance(path, LambdaPath):
        return path
    lambdas = np.asarray(path, dtype=float)
    ratio = float(lambdas[-1] / lambdas[0]) if len(lambdas) > 1 else DEFAULT_LAMBDA_MIN_RATIO
    return LambdaPath(lambdas=lambdas, n_lambda=len(lambdas), lambda_min_ratio=ratio)


def fit_path(
    prob: MLMProblem,
    path: Union[LambdaPath, Sequence[float]],
    config: Optional[SolverConfig] = None,
    warm_start: bool = True,
) -> PathFit:
    """
    Fit every lambda in order, each starting from the previous solution.

    The first lambda starts at zero. A lambda that fails to converge is kept
    with its flag set and its last iterate still seeds the next fit. With
    warm_start=False every lambda starts at zero.
    """
    path = as_lambda_path(path)
    config = SolverConfig() if config is None else config
    algorithm = Algorithm(config.algorithm)
    solver = SOLVERS[algorithm]
    cache = build_spectral_cache(prob) if algorithm is Algorithm.ADMM else None

    fits = []
    for index, lam in enumerate(path.lambdas):
        B_init = fits[-1].B if (warm_start and fits) else None
        if cache is not None:
            result = fit_admm(prob, lam, config, B_init, cache=cache)
        else:
            result = solver(prob, lam, config, B_init)
        fits.append(result)
        logger.debug(
            "path %d/%d lambda=%.6g nnz=%d iterations=%d",
            index + 1, len(path), lam, result.B.nnz, result.iterations,
        )
    path_fit = PathFit(lambdas=path.lambdas, fits=fits, warm_started=warm_start)
    logger.info(
        "fitted %d lambdas with %s (%d iterations, %d unconverged)",
        len(path), algorithm.value, path_fit.total_iterations,
        sum(not fit.converged for fit in fits),
    )
    return path_fit


def lambda_for_sparsity(path_fit: PathFit, fraction: float) -> Tuple[float, int]:
    """
    Largest lambda whose share of nonzero penalized coefficients reaches fraction.

    Returns:
        (lambda, index into the path)
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    n_penalized = int(path_fit.fits[0].B.mask.sum())
    shares = path_fit.nnz_per_lambda / max(n_penalized, 1)
    reached = np.flatnonzero(shares >= fraction)
    if reached.size == 0:
        raise ValueError(f"no lambda on the path reaches a nonzero share of {fraction}")
    index = int(reached[0])
    return float(path_fit.lambdas[index]), index
