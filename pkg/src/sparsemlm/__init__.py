"""
sparsemlm - L1-penalized matrix linear models Y = XBZ' + E.
"""

from .app_types import CoefficientMatrix, CVResult, FitResult, LambdaPath, MLMProblem, PathFit
from .core import backtransform, build_problem, kkt_check, objective, predict
from .main import main
from .settings import Algorithm, Criterion, CVConfig, SolverConfig
from .solvers import fit
from .tuning import default_lambda_path, fit_path, kfold_cv, select_lambda

__all__ = [
    "Algorithm",
    "CVConfig",
    "CVResult",
    "CoefficientMatrix",
    "Criterion",
    "FitResult",
    "LambdaPath",
    "MLMProblem",
    "PathFit",
    "SolverConfig",
    "backtransform",
    "build_problem",
    "default_lambda_path",
    "fit",
    "fit_path",
    "kfold_cv",
    "kkt_check",
    "main",
    "objective",
    "predict",
    "select_lambda",
]
