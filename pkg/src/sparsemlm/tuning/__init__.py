"""
Regularization paths and cross-validated lambda selection.
"""

from .cv import kfold_cv, make_folds, select_lambda
from .path import default_lambda_path, fit_path, lambda_for_sparsity, lambda_max

__all__ = [
    'default_lambda_path',
    'fit_path',
    'kfold_cv',
    'lambda_for_sparsity',
    'lambda_max',
    'make_folds',
    'select_lambda',
]
