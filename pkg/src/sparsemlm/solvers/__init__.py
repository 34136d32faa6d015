"""
Solvers for one (problem, lambda) pair.
"""

from typing import Callable, Dict, Optional

from ..app_types import FitResult, MLMProblem
from ..core.problem import Coefficients
from ..settings import Algorithm, SolverConfig
from .admm import fit_admm, initial_rho
from .convergence import converged
from .coordinate_descent import CoordinateSweeper, fit_cd
from .proximal_gradient import fit_fista_backtrack, fit_fista_fixed, fit_ista

Solver = Callable[..., FitResult]

SOLVERS: Dict[Algorithm, Solver] = {
    Algorithm.CD_CYCLIC: fit_cd,
    Algorithm.CD_RANDOM: fit_cd,
    Algorithm.ISTA: fit_ista,
    Algorithm.FISTA_FIXED: fit_fista_fixed,
    Algorithm.FISTA_BACKTRACK: fit_fista_backtrack,
    Algorithm.ADMM: fit_admm,
}


def fit(
    prob: MLMProblem,
    lam: float,
    config: Optional[SolverConfig] = None,
    B_init: Optional[Coefficients] = None,
) -> FitResult:
    """Fit one penalty with the algorithm named in config."""
    config = SolverConfig() if config is None else config
    return SOLVERS[Algorithm(config.algorithm)](prob, lam, config, B_init)


__all__ = [
    'SOLVERS',
    'CoordinateSweeper',
    'converged',
    'fit',
    'fit_admm',
    'fit_cd',
    'fit_fista_backtrack',
    'fit_fista_fixed',
    'fit_ista',
    'initial_rho',
]
