"""
k-fold cross-validation over a lambda path.

Folds partition the observation rows of (Y, X); Z is shared by every fold.
Each fold re-standardizes its training rows and scores the held-out rows with
the training centers and scales.
"""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from ..app_types import CVResult, LambdaPath, MLMProblem
from ..core.problem import residuals, subset_rows, transform_x
from ..errors import DataError
from ..settings import Criterion, CVConfig, SolverConfig
from .path import as_lambda_path, fit_path

logger = logging.getLogger(__name__)


def make_folds(n: int, n_folds: int, fold_seed: int) -> List[np.ndarray]:
    """Seeded disjoint cover of range(n) by n_folds sorted index arrays."""
    if n_folds < 2:
        raise DataError(f"need at least 2 folds, got {n_folds}")
    if n_folds > n:
        raise DataError(f"cannot split {n} rows into {n_folds} folds")
    perm = np.random.default_rng(fold_seed).permutation(n)
    return [np.sort(fold) for fold in np.array_split(perm, n_folds)]


def information_criterion(rss: float, n_obs: int, df: int, criterion: Criterion) -> float:
    """Gaussian AIC/BIC up to constants: N log(RSS/N) + df * (2 or log N)."""
    rss = max(rss, np.finfo(float).tiny)
    fit_term = n_obs * np.log(rss / n_obs)
    if criterion is Criterion.AIC:
        return float(fit_term + 2.0 * df)
    return float(fit_term + df * np.log(n_obs))


def _score_fold(
    prob: MLMProblem,
    test_rows: np.ndarray,
    path: LambdaPath,
    solver_config: SolverConfig,
    criterion: Criterion,
) -> np.ndarray:
    train_rows = np.setdiff1d(np.arange(prob.n), test_rows)
    try:
        train = subset_rows(prob, train_rows)
    except DataError as e:
        logger.warning("fold with %d held-out rows is invalid: %s", len(test_rows), e)
        return np.full(len(path), np.nan)

    path_fit = fit_path(train, path, solver_config)
    scores = np.empty(len(path))
    if criterion in (Criterion.MSE, Criterion.TEST_ERROR):
        X_test = transform_x(train, prob.raw_X[test_rows])
        Y_test = prob.Y[test_rows]
        for k, result in enumerate(path_fit.fits):
            pred = np.linalg.multi_dot([X_test, result.B.values, train.Z.T])
            scores[k] = np.mean((Y_test - pred) ** 2)
    else:
        n_obs = train.n * train.m
        for k, result in enumerate(path_fit.fits):
            rss = float(np.sum(residuals(train, result.B) ** 2))
            df = result.B.nnz + train.penalty.n_unpenalized
            scores[k] = information_criterion(rss, n_obs, df, criterion)
    return scores


def _select_index(mean_criterion: np.ndarray) -> int:
    if mean_criterion.size == 0 or np.all(np.isnan(mean_criterion)):
        raise DataError("every fold is invalid; no lambda can be selected")
    # nanargmin keeps the first minimum, which is the largest lambda
    return int(np.nanargmin(mean_criterion))


def kfold_cv(
    prob: MLMProblem,
    path: Union[LambdaPath, Sequence[float]],
    solver_config: Optional[SolverConfig] = None,
    cv_config: Optional[CVConfig] = None,
) -> CVResult:
    """
    Cross-validate every lambda of the path.

    Args:
        prob: Full problem; its standardization flags are reapplied per fold
        path: Lambdas, largest first
        solver_config: Settings for the per-fold path fits
        cv_config: Fold count, criterion, seed and worker count

    Returns:
        CVResult with the folds x lambdas criterion matrix. Invalid folds are
        NaN rows and do not enter the per-lambda mean.
    """
    path = as_lambda_path(path)
    solver_config = SolverConfig() if solver_config is None else solver_config
    cv_config = CVConfig() if cv_config is None else cv_config
    criterion = Criterion(cv_config.criterion)

    folds = make_folds(prob.n, cv_config.n_folds, cv_config.fold_seed)
    logger.info(
        "cross-validating %d lambdas over %d folds (%s, n_jobs=%d)",
        len(path), len(folds), criterion.value, cv_config.n_jobs,
    )
    rows = Parallel(n_jobs=cv_config.n_jobs)(
        delayed(_score_fold)(prob, fold, path, solver_config, criterion) for fold in folds
    )
    criterion_matrix = np.vstack(rows)

    valid = ~np.isnan(criterion_matrix)
    counts = valid.sum(axis=0)
    totals = np.where(valid, criterion_matrix, 0.0).sum(axis=0)
    mean_criterion = np.full(len(path), np.nan)
    np.divide(totals, counts, out=mean_criterion, where=counts > 0)

    index = _select_index(mean_criterion)
    logger.info("selected lambda %.6g (index %d)", path.lambdas[index], index)
    return CVResult(
        criterion=criterion.value,
        lambdas=path.lambdas,
        folds=folds,
        criterion_matrix=criterion_matrix,
        mean_criterion=mean_criterion,
        selected_lambda=float(path.lambdas[index]),
        selected_index=index,
    )


def select_lambda(result: CVResult) -> float:
    """Lambda minimizing the mean criterion; ties go to the larger lambda."""
    return float(result.lambdas[_select_index(np.asarray(result.mean_criterion))])
