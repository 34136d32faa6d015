"""
Problem construction, standardization, residuals and back-transformation.
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..app_types import CoefficientMatrix, MLMProblem, PenaltyMask
from ..constants import ZERO_VARIANCE_RTOL
from ..errors import DataError

logger = logging.getLogger(__name__)

Coefficients = Union[CoefficientMatrix, np.ndarray]
INTERCEPT_LABEL = "(intercept)"


def _as_matrix(name: str, values) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim == 1:
        array = array[:, None]
    if array.ndim != 2:
        raise DataError(f"{name} must be a 2-d matrix, got {array.ndim} dimensions")
    if not np.all(np.isfinite(array)):
        bad = np.argwhere(~np.isfinite(array))[0]
        raise DataError(f"{name} has a non-finite value at row {bad[0]}, column {bad[1]}")
    return array


def _column_stats(name: str, raw: np.ndarray, center: bool, scale: bool) -> Tuple[np.ndarray, np.ndarray]:
    """
    Centers and scales for each raw column.

    Zero-variance columns are rejected whether or not the axis is
    standardized; the raw matrices never contain the intercept.
    """
    n_cols = raw.shape[1]
    centers = np.zeros(n_cols)
    scales = np.ones(n_cols)
    if raw.shape[0] < 2 or n_cols == 0:
        return centers, scales
    sds = raw.std(axis=0, ddof=1)
    magnitude = np.maximum(np.abs(raw).max(axis=0), 1.0)
    constant = sds <= ZERO_VARIANCE_RTOL * magnitude
    if np.any(constant):
        col = int(np.flatnonzero(constant)[0])
        raise DataError(f"{name} column {col} has zero variance")
    if center:
        centers = raw.mean(axis=0)
    if scale:
        scales = sds
    return centers, scales


def _design(raw: np.ndarray, centers: np.ndarray, scales: np.ndarray, intercept: bool) -> np.ndarray:
    standardized = (raw - centers) / scales
    if intercept:
        return np.hstack([np.ones((raw.shape[0], 1)), standardized])
    return standardized


def _labels(given: Optional[Sequence[str]], n_cols: int, prefix: str, intercept: bool) -> List[str]:
    labels = list(given) if given is not None else [f"{prefix}{k + 1}" for k in range(n_cols)]
    if len(labels) != n_cols:
        raise DataError(f"expected {n_cols} {prefix} labels, got {len(labels)}")
    return ([INTERCEPT_LABEL] if intercept else []) + labels


def _freeze(*arrays: np.ndarray) -> None:
    for array in arrays:
        array.setflags(write=False)


def build_problem(
    Y,
    X,
    Z,
    intercept_x: bool = True,
    intercept_z: bool = True,
    standardize: Union[bool, Tuple[bool, bool]] = True,
    x_labels: Optional[Sequence[str]] = None,
    z_labels: Optional[Sequence[str]] = None,
) -> MLMProblem:
    """
    Build an immutable matrix linear model problem.

    Args:
        Y: n x m response matrix
        X: n x p_raw row covariates (no intercept column)
        Z: m x q_raw column covariates (no intercept column)
        intercept_x: Prepend an all-ones column to X
        intercept_z: Prepend an all-ones column to Z
        standardize: One flag for both designs, or an (x, z) pair
        x_labels: Optional names of the raw X columns
        z_labels: Optional names of the raw Z columns

    Returns:
        MLMProblem whose penalty mask leaves intercept rows/columns of B
        unpenalized

    Columns are scaled to unit sample sd (n-1 denominator) when standardized,
    and centered only on an axis that carries an intercept, so that the
    intercept absorbs the centering and back-transformation stays exact.
    """
    Y = _as_matrix("Y", Y)
    raw_X = _as_matrix("X", X)
    raw_Z = _as_matrix("Z", Z)
    n, m = Y.shape
    if n < 2 or m < 2:
        raise DataError(f"Y must have at least 2 rows and 2 columns, got {n}x{m}")
    if raw_X.shape[0] != n:
        raise DataError(f"X has {raw_X.shape[0]} rows but Y has {n}")
    if raw_Z.shape[0] != m:
        raise DataError(f"Z has {raw_Z.shape[0]} rows but Y has {m} columns")

    if isinstance(standardize, tuple):
        std_x, std_z = (bool(flag) for flag in standardize)
    else:
        std_x = std_z = bool(standardize)

    x_centers, x_scales = _column_stats("X", raw_X, center=std_x and intercept_x, scale=std_x)
    z_centers, z_scales = _column_stats("Z", raw_Z, center=std_z and intercept_z, scale=std_z)
    X_work = _design(raw_X, x_centers, x_scales, intercept_x)
    Z_work = _design(raw_Z, z_centers, z_scales, intercept_z)
    if X_work.shape[1] == 0 or Z_work.shape[1] == 0:
        raise DataError("X and Z need at least one column (covariate or intercept)")

    mask = np.ones((X_work.shape[1], Z_work.shape[1]), dtype=bool)
    if intercept_x:
        mask[0, :] = False
    if intercept_z:
        mask[:, 0] = False

    _freeze(Y, X_work, Z_work, raw_X, raw_Z, mask)
    logger.debug(
        "built problem n=%d m=%d p=%d q=%d standardize=(%s, %s)",
        n, m, X_work.shape[1], Z_work.shape[1], std_x, std_z,
    )
    return MLMProblem(
        Y=Y,
        X=X_work,
        Z=Z_work,
        raw_X=raw_X,
        raw_Z=raw_Z,
        intercept_x=intercept_x,
        intercept_z=intercept_z,
        standardize_flags=(std_x, std_z),
        x_centers=x_centers,
        x_scales=x_scales,
        z_centers=z_centers,
        z_scales=z_scales,
        penalty=PenaltyMask(mask),
        x_labels=_labels(x_labels, raw_X.shape[1], "x", intercept_x),
        z_labels=_labels(z_labels, raw_Z.shape[1], "z", intercept_z),
    )


def coefficient_values(prob: MLMProblem, B: Coefficients) -> np.ndarray:
    """Return the raw p x q array behind B, checking its shape."""
    values = B.values if isinstance(B, CoefficientMatrix) else np.asarray(B, dtype=float)
    if values.shape != (prob.p, prob.q):
        raise DataError(f"B must be {prob.p}x{prob.q}, got {values.shape}")
    return values


def as_coefficients(prob: MLMProblem, values: np.ndarray) -> CoefficientMatrix:
    return CoefficientMatrix(values=np.array(values, dtype=float), mask=prob.mask)


def zero_coefficients(prob: MLMProblem) -> CoefficientMatrix:
    return as_coefficients(prob, np.zeros((prob.p, prob.q)))


def fitted(prob: MLMProblem, B: Coefficients) -> np.ndarray:
    """X B Z' as two rectangular products."""
    return np.linalg.multi_dot([prob.X, coefficient_values(prob, B), prob.Z.T])


def residuals(prob: MLMProblem, B: Coefficients) -> np.ndarray:
    """Y - X B Z'; never forms a Kronecker product."""
    return prob.Y - fitted(prob, B)


def transform_x(prob: MLMProblem, X_new) -> np.ndarray:
    """Map raw row covariates onto the working design with the problem's centers/scales."""
    raw = _as_matrix("X_new", X_new)
    if raw.shape[1] != prob.raw_X.shape[1]:
        raise DataError(f"X_new has {raw.shape[1]} columns, expected {prob.raw_X.shape[1]}")
    return _design(raw, prob.x_centers, prob.x_scales, prob.intercept_x)


def predict(prob: MLMProblem, B: Coefficients, X_new=None) -> np.ndarray:
    """Fitted values for the training rows, or for new raw row covariates."""
    if X_new is None:
        return fitted(prob, B)
    design = transform_x(prob, X_new)
    return np.linalg.multi_dot([design, coefficient_values(prob, B), prob.Z.T])


def _axis_transform(centers: np.ndarray, scales: np.ndarray, intercept: bool) -> np.ndarray:
    """
    T such that working design = [1, raw] @ T (or raw @ T without intercept).
    """
    inv = 1.0 / scales
    if not intercept:
        return np.diag(inv)
    size = len(scales) + 1
    T = np.zeros((size, size))
    T[0, 0] = 1.0
    T[0, 1:] = -centers * inv
    T[1:, 1:] = np.diag(inv)
    return T


def backtransform(prob: MLMProblem, B_std: Coefficients) -> CoefficientMatrix:
    """
    Express standardized-scale coefficients on the original covariate scale.

    Args:
        prob: A standardized problem
        B_std: Coefficients fitted on prob's working designs

    Returns:
        Coefficients for [1, raw X] and [1, raw Z] with identical fitted values;
        intercept entries absorb the centering terms
    """
    if not prob.is_standardized:
        raise DataError("backtransform requires a standardized problem")
    values = coefficient_values(prob, B_std)
    T_x = _axis_transform(prob.x_centers, prob.x_scales, prob.intercept_x)
    T_z = _axis_transform(prob.z_centers, prob.z_scales, prob.intercept_z)
    return as_coefficients(prob, np.linalg.multi_dot([T_x, values, T_z.T]))


def raw_design_x(prob: MLMProblem) -> np.ndarray:
    """Original-scale X with the intercept column, matching backtransform output."""
    return _design(prob.raw_X, np.zeros(prob.raw_X.shape[1]), np.ones(prob.raw_X.shape[1]), prob.intercept_x)


def raw_design_z(prob: MLMProblem) -> np.ndarray:
    """Original-scale Z with the intercept column, matching backtransform output."""
    return _design(prob.raw_Z, np.zeros(prob.raw_Z.shape[1]), np.ones(prob.raw_Z.shape[1]), prob.intercept_z)


def subset_rows(prob: MLMProblem, rows: np.ndarray) -> MLMProblem:
    """Rebuild the problem on a subset of observations, re-standardizing from scratch."""
    return build_problem(
        prob.Y[rows],
        prob.raw_X[rows],
        prob.raw_Z,
        intercept_x=prob.intercept_x,
        intercept_z=prob.intercept_z,
        standardize=prob.standardize_flags,
        x_labels=prob.x_labels[1:] if prob.intercept_x else prob.x_labels,
        z_labels=prob.z_labels[1:] if prob.intercept_z else prob.z_labels,
    )
