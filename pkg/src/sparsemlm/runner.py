"""
Executes one RunConfig: loads inputs, runs the command, writes outputs.
"""

import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

from .app_types import FitResult, LabeledMatrix, MLMProblem, PathFit, SimSpec
from .constants import (
    COEF_AXIS_LABEL,
    CV_MEAN_NAME,
    CV_TABLE_NAME,
    EXIT_CONFIG_ERROR,
    EXIT_DATA_ERROR,
    EXIT_OK,
    MANIFEST_NAME,
    NNZ_SUMMARY_NAME,
)
from .core.oracle import kkt_check
from .core.problem import build_problem
from .errors import ConfigError, SparseMLMError
from .services import ExportManager, MatrixFileManager, ReportBuilder
from .settings import Command, RunConfig
from .sim import simulate_enviro, simulate_mlm, timing_grid, timing_ratio_table
from .sim.screening import auc_table, roc_table, screening_rocs
from .solvers import fit
from .tuning import default_lambda_path, fit_path, kfold_cv, lambda_max

logger = logging.getLogger(__name__)


def load_problem(config: RunConfig) -> MLMProblem:
    """Read Y, X and Z and build the problem the config describes."""
    reader = MatrixFileManager()
    Y, X, Z = (
        reader.load_matrix(path, has_header=config.has_header, row_labels=config.row_labels)
        for path in (config.y_path, config.x_path, config.z_path)
    )
    return build_problem(
        Y.values,
        X.values,
        Z.values,
        intercept_x=config.intercept_x,
        intercept_z=config.intercept_z,
        standardize=config.standardize,
        x_labels=X.column_labels,
        z_labels=Z.column_labels,
    )


def load_coefficients(path: Path) -> LabeledMatrix:
    """Read a coefficient file, with or without the labelled header fit writes."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return MatrixFileManager().load_matrix(path)
    with path.open(encoding="utf-8") as handle:
        first = handle.readline()
    labelled = first.split(",")[0].split("\t")[0].strip() == COEF_AXIS_LABEL
    return MatrixFileManager().load_matrix(path, has_header=labelled, row_labels=labelled)


def fit_summary(lambdas, fits) -> pd.DataFrame:
    return pd.DataFrame({
        "lambda": np.asarray(lambdas, dtype=float),
        "nnz": [f.B.nnz for f in fits],
        "iterations": [f.iterations for f in fits],
        "converged": [int(f.converged) for f in fits],
        "objective": [f.final_objective for f in fits],
        "max_change": [f.max_change for f in fits],
    })


def _write_fit(exporter: ExportManager, name: str, result: FitResult, prob: MLMProblem) -> None:
    exporter.write_coefficients(name, result.B, prob)
    if result.B_original is not None:
        exporter.write_coefficients(f"{name}_original", result.B_original, prob)


def _write_path(exporter: ExportManager, path_fit: PathFit, prob: MLMProblem) -> None:
    for index, result in enumerate(path_fit.fits):
        _write_fit(exporter, f"coefficients_{index:03d}", result, prob)
    exporter.write_table(NNZ_SUMMARY_NAME, fit_summary(path_fit.lambdas, path_fit.fits))


def run_fit(config: RunConfig, exporter: ExportManager) -> Dict[str, Any]:
    prob = load_problem(config)
    lam = config.lam if config.lam is not None else lambda_max(prob)
    result = fit(prob, lam, config.solver)
    _write_fit(exporter, "coefficients", result, prob)
    exporter.write_table(NNZ_SUMMARY_NAME, fit_summary([lam], [result]))
    return {
        "lambda": lam,
        "converged": result.converged,
        "iterations": result.iterations,
        "nnz": result.B.nnz,
        "objective": result.final_objective,
    }


def run_path(config: RunConfig, exporter: ExportManager) -> Dict[str, Any]:
    prob = load_problem(config)
    path = default_lambda_path(prob, config.n_lambda, config.lambda_min_ratio)
    path_fit = fit_path(prob, path, config.solver)
    _write_path(exporter, path_fit, prob)
    return {
        "lambdas": path.lambdas.tolist(),
        "converged": [f.converged for f in path_fit.fits],
        "all_converged": path_fit.all_converged,
        "total_iterations": path_fit.total_iterations,
    }


def run_cv(config: RunConfig, exporter: ExportManager) -> Dict[str, Any]:
    prob = load_problem(config)
    path = default_lambda_path(prob, config.n_lambda, config.lambda_min_ratio)
    cv_config = config.cv.model_copy(update={"n_jobs": config.workers})
    cv = kfold_cv(prob, path, config.solver, cv_config)

    columns = [f"lambda_{k:03d}" for k in range(len(path))]
    criterion = pd.DataFrame(cv.criterion_matrix, columns=columns)
    criterion.insert(0, "fold", np.arange(len(cv.folds)))
    exporter.write_table(CV_TABLE_NAME, criterion)
    exporter.write_table(CV_MEAN_NAME, pd.DataFrame({
        "lambda": cv.lambdas,
        "mean_criterion": cv.mean_criterion,
        "valid_folds": (~np.isnan(cv.criterion_matrix)).sum(axis=0),
    }))

    path_fit = fit_path(prob, path, config.solver)
    _write_path(exporter, path_fit, prob)
    _write_fit(exporter, "coefficients", path_fit.fits[cv.selected_index], prob)
    return {
        "criterion": cv.criterion,
        "selected_lambda": cv.selected_lambda,
        "selected_index": cv.selected_index,
        "lambdas": cv.lambdas.tolist(),
        "folds": [fold.tolist() for fold in cv.folds],
        "converged": [f.converged for f in path_fit.fits],
    }


def run_simulate(config: RunConfig, exporter: ExportManager) -> Dict[str, Any]:
    options = config.simulation
    if options.scenario == "mlm":
        sim = simulate_mlm(SimSpec(
            n=options.n, m=options.m, p=options.p, q=options.q,
            frac_main_nonzero=options.frac_main_nonzero,
            frac_inter_nonzero=options.frac_inter_nonzero,
            effect_sd=options.effect_sd,
            noise_sd=options.noise_sd,
            seed=options.seed,
        ))
    else:
        sim = simulate_enviro(
            options.n_chem, options.n_tissue, options.n_subjects, options.n_demog,
            seed=options.seed,
            frac_main_nonzero=options.frac_main_nonzero,
            frac_inter_nonzero=options.frac_inter_nonzero,
            effect_sd=options.effect_sd,
            noise_sd=options.noise_sd,
        )
    prob, B_true = sim.prob, sim.B_true
    exporter.write_matrix("Y", prob.Y)
    exporter.write_matrix("X", prob.raw_X)
    exporter.write_matrix("Z", prob.raw_Z)
    exporter.write_coefficients("B_true", B_true, prob)
    results: Dict[str, Any] = {"scenario": options.scenario, "nnz_true": B_true.nnz}

    if options.scenario == "enviro" and options.roc:
        rocs = screening_rocs(sim, config.solver, config.n_lambda, config.lambda_min_ratio)
        for name, roc in rocs.items():
            exporter.write_table(f"roc_{name}", roc_table(roc))
        exporter.write_table("auc", auc_table(rocs))
        results["auc"] = {name: roc.auc for name, roc in rocs.items()}
    return results


def run_bench(config: RunConfig, exporter: ExportManager) -> Dict[str, Any]:
    bench = config.bench
    configs = [config.solver.model_copy(update={"algorithm": algorithm}) for algorithm in bench.algorithms]
    timings = timing_grid(bench.dims, configs, n_reps=bench.n_reps, seed=bench.seed, n_lambda=bench.n_lambda)
    exporter.write_table("timing", timings)
    results: Dict[str, Any] = {"all_converged": bool(timings["converged"].all())}
    try:
        ratios = timing_ratio_table(timings)
    except ValueError:
        logger.info("timing ratio table needs both fista_backtrack and admm; skipped")
    else:
        exporter.write_table("timing_ratio", ratios)
    return results


def run_kkt(config: RunConfig, exporter: ExportManager) -> Dict[str, Any]:
    prob = load_problem(config)
    coefficients = load_coefficients(config.coef_path)
    report = kkt_check(prob, coefficients.values, config.lam, tol=config.kkt_tol)
    exporter.write_matrix(
        "kkt_residuals", report.residuals,
        column_labels=prob.z_labels, row_labels=prob.x_labels, axis_label=COEF_AXIS_LABEL,
    )
    exporter.write_table("kkt_violations", pd.DataFrame(
        [(v.row, v.col, v.kind, v.residual) for v in report.violations],
        columns=["row", "col", "kind", "residual"],
    ))
    if not report.ok:
        logger.warning("%d KKT violations at tol %.1e", len(report.violations), report.tol)
    return {"ok": report.ok, "n_violations": len(report.violations), "max_residual": report.max_residual}


COMMANDS: Dict[Command, Callable[[RunConfig, ExportManager], Dict[str, Any]]] = {
    Command.FIT: run_fit,
    Command.PATH: run_path,
    Command.CV: run_cv,
    Command.SIMULATE: run_simulate,
    Command.BENCH: run_bench,
    Command.KKT: run_kkt,
}


def exit_code_for(error: Exception) -> int:
    if isinstance(error, SparseMLMError):
        return error.exit_code
    if isinstance(error, (ValidationError, ValueError)):
        return EXIT_CONFIG_ERROR
    return EXIT_DATA_ERROR


def run(config: RunConfig) -> int:
    """
    Run one command.

    Returns:
        Process exit code: 0 on success (including unconverged fits, which are
        flagged in the manifest), 2 config error, 3 data error, 4 numerical failure
    """
    command = Command(config.command)
    if command is Command.REPORT:
        try:
            paths = ReportBuilder(config.output_dir).write()
        except (SparseMLMError, OSError, ValueError) as e:
            logger.error("report failed: %s", e)
            return exit_code_for(e)
        logger.info("wrote %s", ", ".join(str(p) for p in paths))
        return EXIT_OK

    exporter = ExportManager(config.output_dir, config.output_format)
    try:
        results = COMMANDS[command](config, exporter)
        exporter.write_manifest(config, results)
    except (SparseMLMError, ValidationError, ValueError, OSError) as e:
        logger.error("%s failed: %s", command.value, e)
        exporter.rollback()
        return exit_code_for(e)
    logger.info("%s wrote %d files to %s", command.value, len(exporter.files), config.output_dir)
    return EXIT_OK


def config_from_manifest(manifest_path: Path, output_dir: Optional[Path] = None) -> RunConfig:
    """
    Rebuild the RunConfig recorded in a manifest, optionally redirecting output.

    Raises:
        ConfigError: the manifest is missing or does not hold a valid config
    """
    manifest_path = Path(manifest_path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / MANIFEST_NAME
    try:
        recorded = json.loads(manifest_path.read_text(encoding="utf-8"))["config"]
        if output_dir is not None:
            recorded["output_dir"] = str(output_dir)
        return RunConfig.model_validate(recorded)
    except (OSError, KeyError, json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"cannot rebuild a run from {manifest_path}: {e}") from e
