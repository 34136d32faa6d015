"""
Model data, objective pieces and reference oracles.
"""

from .objective import (
    build_spectral_cache,
    gradient,
    lipschitz_step,
    loss,
    objective,
    prox_f_direct,
    prox_f_spectral,
    soft_threshold,
    soft_threshold_matrix,
)
from .oracle import kkt_check, lasso_oracle, least_squares_oracle, vectorized_design
from .problem import backtransform, build_problem, predict, residuals

__all__ = [
    'backtransform',
    'build_problem',
    'build_spectral_cache',
    'gradient',
    'kkt_check',
    'lasso_oracle',
    'least_squares_oracle',
    'lipschitz_step',
    'loss',
    'objective',
    'predict',
    'prox_f_direct',
    'prox_f_spectral',
    'residuals',
    'soft_threshold',
    'soft_threshold_matrix',
    'vectorized_design',
]
