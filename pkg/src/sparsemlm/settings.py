"""
Validated configuration models for solvers, cross-validation and CLI runs.
"""

from enum import Enum
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .constants import (
    BENCH_N_LAMBDA,
    DEFAULT_EFFECT_SD,
    DEFAULT_GAMMA,
    DEFAULT_INIT_STEP,
    DEFAULT_LAMBDA_MIN_RATIO,
    DEFAULT_MAX_ITER,
    DEFAULT_MU,
    DEFAULT_N_FOLDS,
    DEFAULT_N_LAMBDA,
    DEFAULT_NOISE_SD,
    DEFAULT_SEED,
    DEFAULT_TAU,
    DEFAULT_TOL,
    ENVIRO_DEFAULTS,
    WORKERS_ENV_PREFIX,
)


class Algorithm(str, Enum):
    CD_CYCLIC = "cd_cyclic"
    CD_RANDOM = "cd_random"
    ISTA = "ista"
    FISTA_FIXED = "fista_fixed"
    FISTA_BACKTRACK = "fista_backtrack"
    ADMM = "admm"


class Criterion(str, Enum):
    MSE = "mse"
    TEST_ERROR = "test_error"
    AIC = "aic"
    BIC = "bic"


class Command(str, Enum):
    FIT = "fit"
    PATH = "path"
    CV = "cv"
    SIMULATE = "simulate"
    BENCH = "bench"
    KKT = "kkt"
    REPORT = "report"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class SolverConfig(BaseModel):
    """Algorithm choice plus every tolerance, step parameter and seed."""
    model_config = ConfigDict(frozen=True, use_enum_values=True)

    algorithm: Algorithm = Algorithm.FISTA_BACKTRACK
    tol: float = Field(default=DEFAULT_TOL, gt=0)
    max_iter: int = Field(default=DEFAULT_MAX_ITER, ge=1)
    init_step: float = Field(default=DEFAULT_INIT_STEP, gt=0)
    gamma: float = Field(default=DEFAULT_GAMMA, gt=0, lt=1)
    mu: float = Field(default=DEFAULT_MU, gt=1)
    tau_incr: float = Field(default=DEFAULT_TAU, gt=1)
    tau_decr: float = Field(default=DEFAULT_TAU, gt=1)
    rng_seed: int = DEFAULT_SEED
    active_set: bool = True
    adaptive_rho: bool = True
    restart: bool = True  # gradient-based momentum restart for the FISTA variants
    rho: Optional[float] = Field(default=None, gt=0)
    keep_state: bool = False


class CVConfig(BaseModel):
    """k-fold cross-validation settings; folds always partition rows."""
    model_config = ConfigDict(frozen=True, use_enum_values=True)

    n_folds: int = Field(default=DEFAULT_N_FOLDS, ge=2)
    criterion: Criterion = Criterion.MSE
    fold_seed: int = DEFAULT_SEED
    fold_axis: Literal["rows"] = "rows"
    n_jobs: int = Field(default=1, ge=1)


class SimulationOptions(BaseModel):
    """Generator settings for the simulate command."""
    model_config = ConfigDict(frozen=True)

    scenario: Literal["mlm", "enviro"] = "mlm"
    n: int = Field(default=100, ge=2)
    m: int = Field(default=100, ge=2)
    p: int = Field(default=10, ge=1)
    q: int = Field(default=10, ge=1)
    frac_main_nonzero: float = Field(default=0.5, ge=0, le=1)
    frac_inter_nonzero: float = Field(default=0.125, ge=0, le=1)
    effect_sd: float = Field(default=DEFAULT_EFFECT_SD, gt=0)
    noise_sd: float = Field(default=DEFAULT_NOISE_SD, gt=0)
    n_chem: int = Field(default=ENVIRO_DEFAULTS["n_chem"], ge=2)
    n_tissue: int = Field(default=ENVIRO_DEFAULTS["n_tissue"], ge=2)
    n_subjects: int = Field(default=ENVIRO_DEFAULTS["n_subjects"], ge=3)
    n_demog: int = Field(default=ENVIRO_DEFAULTS["n_demog"], ge=1)
    seed: int = DEFAULT_SEED
    roc: bool = False  # enviro only: also fit a path and write ROC curves


class BenchOptions(BaseModel):
    """Dimension grid and replicate count for the bench command."""
    model_config = ConfigDict(frozen=True, use_enum_values=True)

    dims: List[Tuple[int, int, int, int]] = Field(
        default_factory=lambda: [(300, 300, 50, 50), (300, 300, 250, 250)]
    )
    algorithms: List[Algorithm] = Field(
        default_factory=lambda: [Algorithm.FISTA_BACKTRACK, Algorithm.ADMM]
    )
    n_reps: int = Field(default=1, ge=1)
    n_lambda: int = Field(default=BENCH_N_LAMBDA, ge=1)
    seed: int = DEFAULT_SEED


class RunConfig(BaseModel):
    """Everything one CLI invocation needs; echoed verbatim into the manifest."""
    model_config = ConfigDict(frozen=True, use_enum_values=True)

    command: Command
    y_path: Optional[Path] = None
    x_path: Optional[Path] = None
    z_path: Optional[Path] = None
    has_header: bool = False
    row_labels: bool = False
    intercept_x: bool = True
    intercept_z: bool = True
    standardize: bool = True
    solver: SolverConfig = Field(default_factory=SolverConfig)
    lam: Optional[float] = Field(default=None, ge=0)
    n_lambda: int = Field(default=DEFAULT_N_LAMBDA, ge=1)
    lambda_min_ratio: float = Field(default=DEFAULT_LAMBDA_MIN_RATIO, gt=0, lt=1)
    cv: CVConfig = Field(default_factory=CVConfig)
    simulation: SimulationOptions = Field(default_factory=SimulationOptions)
    bench: BenchOptions = Field(default_factory=BenchOptions)
    coef_path: Optional[Path] = None
    kkt_tol: float = Field(default=10 * DEFAULT_TOL, gt=0)
    output_dir: Path = Path("sparsemlm_output")
    output_format: OutputFormat = OutputFormat.CSV
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_command_inputs(self) -> "RunConfig":
        needs_data = {Command.FIT, Command.PATH, Command.CV, Command.KKT}
        if Command(self.command) in needs_data:
            missing = [
                name for name in ("y_path", "x_path", "z_path")
                if getattr(self, name) is None
            ]
            if missing:
                raise ValueError(f"command '{self.command}' requires {', '.join(missing)}")
        if Command(self.command) == Command.KKT:
            if self.coef_path is None or self.lam is None:
                raise ValueError("command 'kkt' requires coef_path and lam")
        return self


class WorkerSettings(BaseSettings):
    """Process-wide defaults read from SPARSEMLM_* environment variables."""
    model_config = SettingsConfigDict(env_prefix=WORKERS_ENV_PREFIX, extra="ignore")

    workers: int = Field(default=1, ge=1)


def default_workers() -> int:
    return WorkerSettings().workers
