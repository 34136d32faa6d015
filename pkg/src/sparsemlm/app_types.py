"""
Type definitions and data classes for sparsemlm.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class PenaltyMask:
    """Boolean p x q matrix; True marks a penalized entry of B."""
    mask: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.mask.shape

    @property
    def n_penalized(self) -> int:
        return int(self.mask.sum())

    @property
    def n_unpenalized(self) -> int:
        return int(self.mask.size - self.mask.sum())


@dataclass
class CoefficientMatrix:
    """A p x q estimate of B; nnz counts nonzero penalized entries."""
    values: np.ndarray
    mask: np.ndarray

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.values[self.mask]))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def copy(self) -> "CoefficientMatrix":
        return CoefficientMatrix(values=self.values.copy(), mask=self.mask)


@dataclass(frozen=True)
class MLMProblem:
    """
    The (Y, X, Z) triple of a matrix linear model Y = XBZ' + E.

    X and Z are the working designs: intercept column first when requested,
    remaining columns standardized when requested. The raw covariates are
    kept so that folds can be re-standardized and new rows transformed.
    """
    Y: np.ndarray
    X: np.ndarray
    Z: np.ndarray
    raw_X: np.ndarray
    raw_Z: np.ndarray
    intercept_x: bool
    intercept_z: bool
    standardize_flags: Tuple[bool, bool]
    x_centers: np.ndarray
    x_scales: np.ndarray
    z_centers: np.ndarray
    z_scales: np.ndarray
    penalty: PenaltyMask
    x_labels: List[str] = field(default_factory=list)
    z_labels: List[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.Y.shape[0]

    @property
    def m(self) -> int:
        return self.Y.shape[1]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def q(self) -> int:
        return self.Z.shape[1]

    @property
    def mask(self) -> np.ndarray:
        return self.penalty.mask

    @property
    def is_standardized(self) -> bool:
        return any(self.standardize_flags)


@dataclass(frozen=True)
class SpectralCache:
    """Eigendecompositions of X'X and Z'Z plus the rotated response Y*."""
    Q_X: np.ndarray
    eig_X: np.ndarray
    Q_Z: np.ndarray
    eig_Z: np.ndarray
    Ystar: np.ndarray
    L: np.ndarray


@dataclass
class FitState:
    """Mutable iterate state owned by a single solver run."""
    B_hat: np.ndarray
    B_prev: np.ndarray
    R: Optional[np.ndarray] = None
    A: Optional[np.ndarray] = None
    B0: Optional[np.ndarray] = None
    B1: Optional[np.ndarray] = None
    B2: Optional[np.ndarray] = None
    rho: Optional[float] = None
    k: int = 0
    step: Optional[float] = None
    momentum_k: int = 0
    primal_residual: float = np.inf
    dual_residual: float = np.inf

    @property
    def max_change(self) -> float:
        return float(np.max(np.abs(self.B_hat - self.B_prev), initial=0.0))


@dataclass
class FitResult:
    """
    Outcome of one (problem, lambda) fit.

    B is on the working scale of the problem's (possibly standardized)
    designs, so predictions use prob.X and prob.Z. When the problem is
    standardized, B_original holds the same fit back-transformed to the raw
    covariates with intercepts; otherwise it is None and B is already on the
    raw scale.
    """
    B: CoefficientMatrix
    iterations: int
    converged: bool
    final_objective: float
    algorithm: str
    lam: float
    max_change: float
    B_original: Optional[CoefficientMatrix] = None
    state: Optional[FitState] = None


@dataclass(frozen=True)
class LambdaPath:
    """A strictly decreasing sequence of positive penalties."""
    lambdas: np.ndarray
    n_lambda: int
    lambda_min_ratio: float

    def __post_init__(self):
        lambdas = np.asarray(self.lambdas, dtype=float)
        if lambdas.ndim != 1 or lambdas.size == 0:
            raise ValueError("lambda path must be a non-empty 1-d sequence")
        if np.any(lambdas <= 0):
            raise ValueError("lambda path values must be positive")
        if np.any(np.diff(lambdas) >= 0):
            raise ValueError("lambda path must be strictly decreasing")
        object.__setattr__(self, "lambdas", lambdas)

    def __len__(self) -> int:
        return len(self.lambdas)


@dataclass
class PathFit:
    """Per-lambda fits along a regularization path."""
    lambdas: np.ndarray
    fits: List[FitResult]
    warm_started: bool = True

    @property
    def nnz_per_lambda(self) -> np.ndarray:
        return np.array([fit.B.nnz for fit in self.fits], dtype=int)

    @property
    def total_iterations(self) -> int:
        return sum(fit.iterations for fit in self.fits)

    @property
    def all_converged(self) -> bool:
        return all(fit.converged for fit in self.fits)


@dataclass
class CVResult:
    """Per-fold, per-lambda criterion values and the selected lambda."""
    criterion: str
    lambdas: np.ndarray
    folds: List[np.ndarray]
    criterion_matrix: np.ndarray
    mean_criterion: np.ndarray
    selected_lambda: float
    selected_index: int


@dataclass(frozen=True)
class KKTViolation:
    """A single entry failing its optimality condition."""
    row: int
    col: int
    kind: str
    residual: float


@dataclass
class KKTReport:
    """Entrywise KKT residuals for a coefficient matrix."""
    lam: float
    tol: float
    residuals: np.ndarray
    violations: List[KKTViolation]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals, initial=0.0))


@dataclass(frozen=True)
class SimSpec:
    """Parameters of the dimension-scaling simulation."""
    n: int
    m: int
    p: int
    q: int
    frac_main_nonzero: float = 0.5
    frac_inter_nonzero: float = 0.125
    effect_sd: float = 2.0
    noise_sd: float = 3.0
    seed: int = 0
    standardize: bool = False

    def __post_init__(self):
        if min(self.n, self.m) < 2 or min(self.p, self.q) < 1:
            raise ValueError("need n, m >= 2 and p, q >= 1")
        for name in ("frac_main_nonzero", "frac_inter_nonzero"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.effect_sd <= 0 or self.noise_sd <= 0:
            raise ValueError("effect_sd and noise_sd must be positive")


@dataclass(frozen=True)
class EnviroLayout:
    """
    Column layout of the environmental-screening design.

    Response column k holds chemical k // n_tissue in tissue k % n_tissue.
    Z columns are [intercept, tissues, chemicals, tissue x chemical].
    """
    n_chem: int
    n_tissue: int
    n_demog: int

    @property
    def tissue_cols(self) -> np.ndarray:
        return 1 + np.arange(self.n_tissue)

    @property
    def chem_cols(self) -> np.ndarray:
        return 1 + self.n_tissue + np.arange(self.n_chem)

    @property
    def combo_cols(self) -> np.ndarray:
        start = 1 + self.n_tissue + self.n_chem
        return start + np.arange(self.n_chem * self.n_tissue)

    def interaction_mask(self, shape: Tuple[int, int]) -> np.ndarray:
        """Demographic x chemical entries of B."""
        mask = np.zeros(shape, dtype=bool)
        mask[1:, self.chem_cols] = True
        return mask


@dataclass
class RocCurve:
    """Receiver operating characteristic with trapezoidal AUC."""
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float


@dataclass
class LabeledMatrix:
    """A dense matrix read from or written to a delimited file."""
    values: np.ndarray
    column_labels: Optional[List[str]] = None
    row_labels: Optional[List[str]] = None
