"""
Wall-clock comparison of solvers on simulated paths of varying dimension.
"""

import logging
import time
from typing import Iterable, List, Sequence, Tuple

import pandas as pd

from ..app_types import SimSpec
from ..constants import BENCH_N_LAMBDA
from ..settings import Algorithm, SolverConfig
from ..tuning.path import default_lambda_path, fit_path
from .generators import simulate_mlm

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ["n", "m", "p", "q", "algorithm", "rep", "seconds", "iterations", "converged"]


def timing_grid(
    dims: Iterable[Tuple[int, int, int, int]],
    solver_configs: Sequence[SolverConfig],
    n_reps: int = 1,
    seed: int = 0,
    n_lambda: int = BENCH_N_LAMBDA,
) -> pd.DataFrame:
    """
    Time an n_lambda path per solver for every dimension tuple and replicate.

    Replicate r of every tuple uses simulation seed seed + r. All solvers see
    the same data and lambdas. Runs are sequential so timings do not compete
    for cores.

    Returns:
        One row per (dims, algorithm, rep) with seconds, iterations and the
        all-converged flag
    """
    rows: List[dict] = []
    for n, m, p, q in dims:
        for rep in range(n_reps):
            prob = simulate_mlm(SimSpec(n=n, m=m, p=p, q=q, seed=seed + rep)).prob
            path = default_lambda_path(prob, n_lambda=n_lambda)
            for config in solver_configs:
                start = time.perf_counter()
                path_fit = fit_path(prob, path, config)
                elapsed = time.perf_counter() - start
                algorithm = Algorithm(config.algorithm).value
                logger.info("n=%d m=%d p=%d q=%d %s rep %d: %.3fs", n, m, p, q, algorithm, rep, elapsed)
                rows.append({
                    "n": n, "m": m, "p": p, "q": q,
                    "algorithm": algorithm,
                    "rep": rep,
                    "seconds": elapsed,
                    "iterations": path_fit.total_iterations,
                    "converged": path_fit.all_converged,
                })
    return pd.DataFrame(rows, columns=TIMING_COLUMNS)


def timing_ratio_table(
    timings: pd.DataFrame,
    numerator: str = Algorithm.FISTA_BACKTRACK.value,
    denominator: str = Algorithm.ADMM.value,
) -> pd.DataFrame:
    """
    Mean seconds per dimension tuple for two algorithms and their ratio.

    Columns: n, m, p, q, <numerator>, <denominator>, ratio.
    """
    means = (
        timings[timings["algorithm"].isin([numerator, denominator])]
        .groupby(["n", "m", "p", "q", "algorithm"])["seconds"]
        .mean()
        .unstack("algorithm")
    )
    for name in (numerator, denominator):
        if name not in means.columns:
            raise ValueError(f"no timings recorded for {name}")
    table = means[[numerator, denominator]].copy()
    table["ratio"] = table[numerator] / table[denominator]
    table.columns.name = None
    return table.reset_index()
