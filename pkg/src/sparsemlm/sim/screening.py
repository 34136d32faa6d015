"""
MLM path versus univariate baselines on a simulated screening study.
"""

import logging
from typing import Dict, List, Optional, Sequence

import pandas as pd

from ..app_types import RocCurve
from ..constants import DEFAULT_LAMBDA_MIN_RATIO, DEFAULT_N_LAMBDA
from ..settings import SolverConfig
from ..tuning.path import default_lambda_path, fit_path
from .generators import EnviroSimulation
from .roc import roc_from_path
from .univariate import univariate_baseline, univariate_pvalues

logger = logging.getLogger(__name__)

# shares of tissues that must pass the cutoff for the hit-count baselines
HIT_FRACTIONS = (0.2, 0.4, 0.6, 0.8)


def default_hit_counts(n_tissue: int) -> List[int]:
    counts = {1} | {max(1, round(frac * n_tissue)) for frac in HIT_FRACTIONS}
    return sorted(counts)


def screening_rocs(
    sim: EnviroSimulation,
    solver_config: Optional[SolverConfig] = None,
    n_lambda: int = DEFAULT_N_LAMBDA,
    lambda_min_ratio: float = DEFAULT_LAMBDA_MIN_RATIO,
    hit_counts: Optional[Sequence[int]] = None,
) -> Dict[str, RocCurve]:
    """
    ROC curves keyed by method: "mlm", "univariate" (pooled per-coefficient)
    and "univariate_hits<k>" for each hit count.
    """
    prob, B_true, layout = sim
    mask = layout.interaction_mask(B_true.shape)
    path = default_lambda_path(prob, n_lambda=n_lambda, lambda_min_ratio=lambda_min_ratio)
    rocs = {"mlm": roc_from_path(fit_path(prob, path, solver_config), B_true, mask)}

    pvalues = univariate_pvalues(prob)
    rocs["univariate"] = univariate_baseline(prob, B_true, layout, hits_needed=None, pvalues=pvalues)
    for hits in hit_counts or default_hit_counts(layout.n_tissue):
        rocs[f"univariate_hits{hits}"] = univariate_baseline(prob, B_true, layout, hits, pvalues=pvalues)
    logger.info("screening AUCs: %s", ", ".join(f"{name}={roc.auc:.3f}" for name, roc in rocs.items()))
    return rocs


def auc_table(rocs: Dict[str, RocCurve]) -> pd.DataFrame:
    return pd.DataFrame({"method": list(rocs), "auc": [roc.auc for roc in rocs.values()]})


def roc_table(roc: RocCurve) -> pd.DataFrame:
    return pd.DataFrame({"fpr": roc.fpr, "tpr": roc.tpr})
