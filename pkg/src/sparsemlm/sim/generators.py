"""
Seeded synthetic data for the dimension-scaling and environmental-screening
studies.

Draw order is part of the contract so a seed always reproduces the same data:
covariates first, then the support uniforms and effect sizes of B (both
row-major over the full p x q coefficient matrix), then the noise matrix.
"""

import logging
from typing import List, NamedTuple

import numpy as np

from ..app_types import CoefficientMatrix, EnviroLayout, MLMProblem, SimSpec
from ..constants import DEFAULT_EFFECT_SD, DEFAULT_FRAC_CHEM, DEFAULT_FRAC_INTER, DEFAULT_FRAC_MAIN, DEFAULT_NOISE_SD
from ..core.problem import build_problem

logger = logging.getLogger(__name__)


class MLMSimulation(NamedTuple):
    prob: MLMProblem
    B_true: CoefficientMatrix


class EnviroSimulation(NamedTuple):
    prob: MLMProblem
    B_true: CoefficientMatrix
    layout: EnviroLayout


def _with_intercept(covariates: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(covariates.shape[0]), covariates])


def _draw_effects(rng: np.random.Generator, rates: np.ndarray, effect_sd: float) -> np.ndarray:
    """Entry (i, j) is a Normal(0, effect_sd^2) draw kept with probability rates[i, j]."""
    uniforms = rng.random(rates.shape)
    sizes = rng.normal(0.0, effect_sd, rates.shape)
    return np.where(uniforms < rates, sizes, 0.0)


def simulate_mlm(spec: SimSpec) -> MLMSimulation:
    """
    Intercept plus p row covariates and q column covariates, all standard normal.

    Row 0 and column 0 of B (the corner excluded) are the main effects, each
    nonzero with probability frac_main_nonzero; the p x q interaction block is
    nonzero with probability frac_inter_nonzero; the corner is always drawn.
    """
    rng = np.random.default_rng(spec.seed)
    X_cov = rng.normal(size=(spec.n, spec.p))
    Z_cov = rng.normal(size=(spec.m, spec.q))

    rates = np.full((spec.p + 1, spec.q + 1), spec.frac_inter_nonzero)
    rates[0, :] = spec.frac_main_nonzero
    rates[:, 0] = spec.frac_main_nonzero
    rates[0, 0] = 1.0
    B = _draw_effects(rng, rates, spec.effect_sd)

    E = rng.normal(0.0, spec.noise_sd, (spec.n, spec.m))
    Y = np.linalg.multi_dot([_with_intercept(X_cov), B, _with_intercept(Z_cov).T]) + E

    prob = build_problem(Y, X_cov, Z_cov, intercept_x=True, intercept_z=True, standardize=spec.standardize)
    logger.debug(
        "simulated mlm n=%d m=%d p=%d q=%d with %d nonzero effects",
        spec.n, spec.m, spec.p, spec.q, int(np.count_nonzero(B)),
    )
    return MLMSimulation(prob=prob, B_true=CoefficientMatrix(values=B, mask=prob.mask))


def enviro_column_design(layout: EnviroLayout) -> np.ndarray:
    """Tissue, chemical and tissue x chemical indicators (no intercept), one row per response column."""
    n_resp = layout.n_chem * layout.n_tissue
    chem = np.arange(n_resp) // layout.n_tissue
    tissue = np.arange(n_resp) % layout.n_tissue
    tissue_ind = np.eye(layout.n_tissue)[tissue]
    chem_ind = np.eye(layout.n_chem)[chem]
    combo_ind = np.eye(n_resp)
    return np.hstack([tissue_ind, chem_ind, combo_ind])


def enviro_labels(layout: EnviroLayout) -> List[str]:
    tissues = [f"tissue{t + 1}" for t in range(layout.n_tissue)]
    chems = [f"chem{c + 1}" for c in range(layout.n_chem)]
    combos = [f"chem{c + 1}:tissue{t + 1}" for c in range(layout.n_chem) for t in range(layout.n_tissue)]
    return tissues + chems + combos


def simulate_enviro(
    n_chem: int,
    n_tissue: int,
    n_subjects: int,
    n_demog: int,
    seed: int = 0,
    frac_main_nonzero: float = DEFAULT_FRAC_MAIN,
    frac_chem_nonzero: float = DEFAULT_FRAC_CHEM,
    frac_inter_nonzero: float = DEFAULT_FRAC_INTER,
    effect_sd: float = DEFAULT_EFFECT_SD,
    noise_sd: float = DEFAULT_NOISE_SD,
    standardize: bool = True,
) -> EnviroSimulation:
    """
    Chemical concentrations measured in several tissues for a cohort of subjects.

    Y has one row per subject and one column per (chemical, tissue) pair. X holds
    standard-normal demographics; Z encodes tissues, chemicals and each
    tissue x chemical combination, both with an intercept column.

    Effects drawn Normal(0, effect_sd^2):
        demographic main effects (column 0)         rate frac_main_nonzero
        tissue main effects (row 0)                 rate frac_main_nonzero
        chemical main effects (row 0)               rate frac_chem_nonzero
        demographic x tissue, demographic x chemical rate frac_inter_nonzero
    Combination columns carry no effect. The demographic x chemical block is the
    interaction block that layout.interaction_mask selects.
    """
    if n_chem < 2 or n_tissue < 2:
        raise ValueError("need at least 2 chemicals and 2 tissues")
    if n_subjects < 3 or n_demog < 1:
        raise ValueError("need at least 3 subjects and 1 demographic covariate")
    layout = EnviroLayout(n_chem=n_chem, n_tissue=n_tissue, n_demog=n_demog)
    rng = np.random.default_rng(seed)
    X_cov = rng.normal(size=(n_subjects, n_demog))
    Z_cov = enviro_column_design(layout)

    p, q = n_demog + 1, Z_cov.shape[1] + 1
    rates = np.zeros((p, q))
    rates[1:, 0] = frac_main_nonzero
    rates[0, layout.tissue_cols] = frac_main_nonzero
    rates[0, layout.chem_cols] = frac_chem_nonzero
    rates[1:, layout.tissue_cols] = frac_inter_nonzero
    rates[1:, layout.chem_cols] = frac_inter_nonzero
    rates[0, 0] = 1.0
    B = _draw_effects(rng, rates, effect_sd)

    E = rng.normal(0.0, noise_sd, (n_subjects, Z_cov.shape[0]))
    Y = np.linalg.multi_dot([_with_intercept(X_cov), B, _with_intercept(Z_cov).T]) + E

    prob = build_problem(
        Y, X_cov, Z_cov,
        intercept_x=True,
        intercept_z=True,
        standardize=standardize,
        x_labels=[f"demog{d + 1}" for d in range(n_demog)],
        z_labels=enviro_labels(layout),
    )
    logger.debug(
        "simulated enviro %d chemicals x %d tissues for %d subjects, %d demographics",
        n_chem, n_tissue, n_subjects, n_demog,
    )
    return EnviroSimulation(prob=prob, B_true=CoefficientMatrix(values=B, mask=prob.mask), layout=layout)
