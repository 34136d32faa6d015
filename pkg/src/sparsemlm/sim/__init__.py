"""
Synthetic data, support-recovery ROC curves and solver timings.
"""

from .generators import EnviroSimulation, MLMSimulation, simulate_enviro, simulate_mlm
from .roc import roc_from_path, roc_from_points, roc_from_scores, roc_point
from .screening import auc_table, roc_table, screening_rocs
from .timing import timing_grid, timing_ratio_table
from .univariate import hit_scores, univariate_baseline, univariate_flags, univariate_pvalues

__all__ = [
    'EnviroSimulation',
    'MLMSimulation',
    'auc_table',
    'hit_scores',
    'roc_from_path',
    'roc_from_points',
    'roc_from_scores',
    'roc_point',
    'roc_table',
    'screening_rocs',
    'simulate_enviro',
    'simulate_mlm',
    'timing_grid',
    'timing_ratio_table',
    'univariate_baseline',
    'univariate_flags',
    'univariate_pvalues',
]
