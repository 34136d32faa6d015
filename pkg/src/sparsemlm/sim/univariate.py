"""
The conventional baseline for the screening study: one ordinary least-squares
model per (chemical, tissue) response on the demographic covariates, with
Benjamini-Hochberg adjusted p-values.
"""

import logging
from typing import Optional

import numpy as np
import statsmodels.api as sm
from statsmodels.stats.multitest import multipletests

from ..app_types import CoefficientMatrix, EnviroLayout, MLMProblem, RocCurve
from ..errors import NumericalError
from .roc import roc_from_scores

logger = logging.getLogger(__name__)


def univariate_pvalues(prob: MLMProblem) -> np.ndarray:
    """
    BH-adjusted p-values of every demographic slope, shape n_demog x m.

    The adjustment runs over all n_demog * m coefficient tests at once.

    Raises:
        NumericalError: the per-model design [1, demographics] is rank deficient
    """
    design = sm.add_constant(prob.raw_X, has_constant="add")
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise NumericalError("univariate design is singular; every per-response OLS fit is unidentified")
    raw = np.empty((prob.raw_X.shape[1], prob.m))
    for k in range(prob.m):
        raw[:, k] = sm.OLS(prob.Y[:, k], design).fit().pvalues[1:]
    adjusted = multipletests(raw.ravel(), method="fdr_bh")[1]
    logger.debug("fitted %d univariate models", prob.m)
    return adjusted.reshape(raw.shape)


def hit_scores(pvalues: np.ndarray, layout: EnviroLayout, hits_needed: int) -> np.ndarray:
    """
    Per (demographic, chemical), the hits_needed-th smallest p-value over tissues.

    An interaction is flagged at a cutoff exactly when at least hits_needed of
    its tissue-wise p-values fall below that cutoff, i.e. when this score does.
    """
    if not 1 <= hits_needed <= layout.n_tissue:
        raise ValueError(f"hits_needed must lie in [1, {layout.n_tissue}], got {hits_needed}")
    n_demog = pvalues.shape[0]
    by_tissue = pvalues.reshape(n_demog, layout.n_chem, layout.n_tissue)
    return np.sort(by_tissue, axis=2)[:, :, hits_needed - 1]


def univariate_flags(scores: np.ndarray, cutoff: float) -> np.ndarray:
    """Calls at one cutoff; a cutoff of 1 or more flags everything."""
    scores = np.asarray(scores)
    if cutoff >= 1.0:
        return np.ones(scores.shape, dtype=bool)
    return scores < cutoff


def interaction_truth(B_true: CoefficientMatrix, layout: EnviroLayout) -> np.ndarray:
    """True demographic x chemical effects, shape n_demog x n_chem."""
    return B_true.values[1:, layout.chem_cols] != 0


def univariate_baseline(
    prob: MLMProblem,
    B_true: CoefficientMatrix,
    layout: EnviroLayout,
    hits_needed: Optional[int] = 1,
    pvalues: Optional[np.ndarray] = None,
) -> RocCurve:
    """
    ROC of the univariate approach against the true demographic x chemical interactions.

    Args:
        prob: Screening problem from simulate_enviro
        B_true: True coefficients
        layout: Column layout of prob
        hits_needed: Tissues that must pass the cutoff before a (demographic, chemical)
            interaction is flagged. None scores every per-response coefficient on
            its own against the interaction its response column belongs to.
        pvalues: Precomputed univariate_pvalues(prob), reused across hit counts

    Returns:
        RocCurve over the sweeping p-value cutoff
    """
    pvalues = univariate_pvalues(prob) if pvalues is None else pvalues
    truth = interaction_truth(B_true, layout)
    if hits_needed is None:
        pooled_truth = np.repeat(truth, layout.n_tissue, axis=1)
        return roc_from_scores(-pvalues, pooled_truth)
    return roc_from_scores(-hit_scores(pvalues, layout, hits_needed), truth)
