"""
ROC curves for support recovery.
"""

from typing import Iterable, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ..app_types import CoefficientMatrix, PathFit, RocCurve
from ..core.problem import Coefficients
from ..errors import DataError


def _truth_counts(truth: np.ndarray) -> Tuple[int, int]:
    n_pos = int(truth.sum())
    n_neg = int(truth.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DataError(f"ROC needs true positives and true negatives, got {n_pos} and {n_neg}")
    return n_pos, n_neg


def roc_point(flags: np.ndarray, truth: np.ndarray) -> Tuple[float, float]:
    """(FPR, TPR) of one set of binary calls."""
    flags = np.asarray(flags, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    n_pos, n_neg = _truth_counts(truth)
    return float((flags & ~truth).sum() / n_neg), float((flags & truth).sum() / n_pos)


def roc_from_points(points: Iterable[Tuple[float, float]]) -> RocCurve:
    """
    Canonical curve through the given (FPR, TPR) points.

    (0, 0) and (1, 1) are added, points are sorted, and TPR is made
    nondecreasing by a running maximum; AUC is the trapezoid area.
    """
    pts = np.array(list(points) + [(0.0, 0.0), (1.0, 1.0)], dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    fpr = pts[order, 0]
    tpr = np.maximum.accumulate(pts[order, 1])
    return RocCurve(fpr=fpr, tpr=tpr, auc=float(trapezoid(tpr, fpr)))


def _selection_mask(B_true: Coefficients, mask: Optional[np.ndarray]) -> np.ndarray:
    if mask is not None:
        return np.asarray(mask, dtype=bool)
    if isinstance(B_true, CoefficientMatrix):
        return B_true.mask
    return np.ones(np.shape(B_true), dtype=bool)


def roc_from_path(path_fit: PathFit, B_true: Coefficients, mask: Optional[np.ndarray] = None) -> RocCurve:
    """
    One (FPR, TPR) point per lambda: estimated nonzeros against true nonzeros
    over the entries selected by mask (the penalized entries when mask is None).
    """
    true_values = B_true.values if isinstance(B_true, CoefficientMatrix) else np.asarray(B_true)
    selected = _selection_mask(B_true, mask)
    truth = true_values[selected] != 0
    _truth_counts(truth)
    return roc_from_points(roc_point(fit.B.values[selected] != 0, truth) for fit in path_fit.fits)


def roc_from_scores(scores: np.ndarray, truth: np.ndarray) -> RocCurve:
    """
    Curve from sweeping a threshold over continuous scores; larger scores are
    called first and tied scores enter together.
    """
    scores = np.asarray(scores, dtype=float).ravel()
    truth = np.asarray(truth, dtype=bool).ravel()
    n_pos, n_neg = _truth_counts(truth)
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    tp = np.cumsum(truth[order])
    fp = np.cumsum(~truth[order])
    # last index of each run of tied scores
    ends = np.flatnonzero(np.r_[sorted_scores[1:] != sorted_scores[:-1], True])
    return roc_from_points(zip(fp[ends] / n_neg, tp[ends] / n_pos))
