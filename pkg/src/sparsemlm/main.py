#!/usr/bin/env python3
"""
Entry point for the sparsemlm command line.

One subcommand per RunConfig command plus `view`:

    sparsemlm fit --y_path Y.csv --x_path X.csv --z_path Z.csv --lam 2.5
    sparsemlm cv --y_path Y.csv --x_path X.csv --z_path Z.csv --cv.n_folds 5
    sparsemlm simulate --simulation.scenario enviro --simulation.roc
    sparsemlm report --run_dir sparsemlm_output
"""

import logging
from pathlib import Path
from typing import ClassVar, List, Optional

from pydantic import BaseModel, Field, PrivateAttr, ValidationError
from pydantic_settings import BaseSettings, CliApp, CliSubCommand, SettingsConfigDict, SettingsError
from rich.logging import RichHandler

from .constants import (
    APP_NAME,
    DEFAULT_LAMBDA_MIN_RATIO,
    DEFAULT_N_LAMBDA,
    DEFAULT_TOL,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    LOGGER_NAME,
    WORKERS_ENV_PREFIX,
)
from .runner import run
from .settings import (
    BenchOptions,
    Command,
    CVConfig,
    OutputFormat,
    RunConfig,
    SimulationOptions,
    SolverConfig,
    default_workers,
)

logger = logging.getLogger(__name__)


class _CommandCLI(BaseModel):
    command: ClassVar[Command]

    output_dir: Path = Field(default=Path("sparsemlm_output"), description="Directory for all outputs")
    output_format: OutputFormat = OutputFormat.CSV
    workers: int = Field(default_factory=default_workers, ge=1, description="Parallel workers (SPARSEMLM_WORKERS)")

    _exit_code: int = PrivateAttr(default=EXIT_OK)

    @property
    def exit_code(self) -> int:
        return self._exit_code

    def run_config(self) -> RunConfig:
        return RunConfig(command=self.command, **self.model_dump())

    def cli_cmd(self) -> None:
        try:
            config = self.run_config()
        except ValidationError as e:
            logger.error("invalid configuration: %s", e)
            self._exit_code = EXIT_CONFIG_ERROR
            return
        self._exit_code = run(config)


class _DataCLI(_CommandCLI):
    y_path: Path = Field(description="Response matrix Y (n x m)")
    x_path: Path = Field(description="Row covariates X (n x p), no intercept column")
    z_path: Path = Field(description="Column covariates Z (m x q), no intercept column")
    has_header: bool = False
    row_labels: bool = False
    intercept_x: bool = True
    intercept_z: bool = True
    standardize: bool = True
    solver: SolverConfig = Field(default_factory=SolverConfig)


class FitCLI(_DataCLI):
    """Fit one penalty (lambda_max when --lam is omitted)."""
    command: ClassVar[Command] = Command.FIT

    lam: Optional[float] = Field(default=None, ge=0)


class PathCLI(_DataCLI):
    """Fit a warm-started regularization path."""
    command: ClassVar[Command] = Command.PATH

    n_lambda: int = Field(default=DEFAULT_N_LAMBDA, ge=1)
    lambda_min_ratio: float = Field(default=DEFAULT_LAMBDA_MIN_RATIO, gt=0, lt=1)


class CvCLI(PathCLI):
    """Select lambda by k-fold cross-validation over the path."""
    command: ClassVar[Command] = Command.CV

    cv: CVConfig = Field(default_factory=CVConfig)


class KktCLI(_DataCLI):
    """Check first-order optimality of a coefficient file at a given lambda."""
    command: ClassVar[Command] = Command.KKT

    coef_path: Path = Field(description="Coefficients on the working (standardized) scale")
    lam: float = Field(ge=0)
    kkt_tol: float = Field(default=10 * DEFAULT_TOL, gt=0)


class SimulateCLI(_CommandCLI):
    """Generate seeded synthetic data."""
    command: ClassVar[Command] = Command.SIMULATE

    simulation: SimulationOptions = Field(default_factory=SimulationOptions)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    n_lambda: int = Field(default=DEFAULT_N_LAMBDA, ge=1)
    lambda_min_ratio: float = Field(default=DEFAULT_LAMBDA_MIN_RATIO, gt=0, lt=1)


class BenchCLI(_CommandCLI):
    """Time solvers over a grid of simulated dimensions."""
    command: ClassVar[Command] = Command.BENCH

    bench: BenchOptions = Field(default_factory=BenchOptions)
    solver: SolverConfig = Field(default_factory=SolverConfig)


class ReportCLI(_CommandCLI):
    """Render a run directory as Markdown and HTML."""
    command: ClassVar[Command] = Command.REPORT

    run_dir: Path = Field(default=Path("sparsemlm_output"), description="Run directory to summarize")

    def run_config(self) -> RunConfig:
        return RunConfig(command=self.command, output_dir=self.run_dir, workers=self.workers)


class ViewCLI(BaseModel):
    """Browse a run directory in the terminal."""

    run_dir: Path = Field(default=Path("sparsemlm_output"), description="Run directory to open")

    @property
    def exit_code(self) -> int:
        return EXIT_OK

    def cli_cmd(self) -> None:
        from .app import RunViewerApp

        RunViewerApp(self.run_dir).run()


class SparseMLMCLI(BaseSettings):
    """L1-penalized matrix linear models: fit, paths, cross-validation, simulations."""
    model_config = SettingsConfigDict(
        cli_prog_name=APP_NAME,
        cli_implicit_flags=True,
        env_prefix=WORKERS_ENV_PREFIX,
        extra="ignore",
    )

    verbose: bool = Field(default=False, description="Log at DEBUG level")

    fit: CliSubCommand[FitCLI]
    path: CliSubCommand[PathCLI]
    cv: CliSubCommand[CvCLI]
    simulate: CliSubCommand[SimulateCLI]
    bench: CliSubCommand[BenchCLI]
    kkt: CliSubCommand[KktCLI]
    report: CliSubCommand[ReportCLI]
    view: CliSubCommand[ViewCLI]

    _exit_code: int = PrivateAttr(default=EXIT_OK)

    @property
    def exit_code(self) -> int:
        return self._exit_code

    def cli_cmd(self) -> None:
        """Run the selected subcommand."""
        if self.verbose:
            logging.getLogger(LOGGER_NAME).setLevel(logging.DEBUG)
        command = CliApp.run_subcommand(self)
        self._exit_code = command.exit_code


def setup_logging(level: int = logging.INFO) -> None:
    """Attach a RichHandler to the package logger once."""
    package_logger = logging.getLogger(LOGGER_NAME)
    if not any(isinstance(h, RichHandler) for h in package_logger.handlers):
        package_logger.addHandler(RichHandler(show_path=False, markup=False))
    package_logger.setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application."""
    setup_logging()
    try:
        cli = CliApp.run(SparseMLMCLI, cli_args=argv)
    except (ValidationError, SettingsError) as e:
        logger.error("invalid arguments: %s", e)
        return EXIT_CONFIG_ERROR
    return cli.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
