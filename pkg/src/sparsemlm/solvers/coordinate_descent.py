"""
Cyclic and random coordinate descent with residual-organized updates.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..app_types import FitResult, FitState, MLMProblem
from ..core.objective import soft_threshold
from ..core.problem import Coefficients, residuals
from ..settings import Algorithm, SolverConfig
from .convergence import converged, finish, initial_coefficients

logger = logging.getLogger(__name__)

Coordinate = Tuple[int, int]


class CoordinateSweeper:
    """
    Holds B and the residual matrix R = Y - XBZ' and updates them one
    coordinate at a time.

    Each update is the exact coordinate minimizer
    B_ij <- S_lambda(c_ij B_ij - grad_ij) / c_ij with c_ij = |X_:i|^2 |Z_:j|^2,
    followed by a rank-1 residual correction; unmasked entries skip the
    thresholding.
    """

    def __init__(self, prob: MLMProblem, B: np.ndarray, lam: float):
        self.X = prob.X
        self.Z = prob.Z
        self.mask = prob.mask
        self.B = B
        self.lam = lam
        self.R = residuals(prob, B)
        self.curvature = np.outer((prob.X ** 2).sum(axis=0), (prob.Z ** 2).sum(axis=0))

    def update(self, i: int, j: int) -> float:
        """Minimize along coordinate (i, j); returns the absolute change."""
        c = self.curvature[i, j]
        if c == 0.0:
            return 0.0
        x_i = self.X[:, i]
        z_j = self.Z[:, j]
        grad = -float(x_i @ self.R @ z_j)
        old = self.B[i, j]
        target = c * old - grad
        if self.mask[i, j]:
            target = soft_threshold(target, self.lam)
        delta = target / c - old
        if delta == 0.0:
            return 0.0
        self.R -= delta * np.outer(x_i, z_j)
        self.B[i, j] = old + delta
        return abs(delta)

    def sweep(self, coords: Sequence[Coordinate]) -> float:
        change = 0.0
        for i, j in coords:
            change = max(change, self.update(i, j))
        return change


def coordinate_list(mask: np.ndarray) -> List[Coordinate]:
    """Row-major (i, j) pairs of the True entries of mask."""
    return [(int(i), int(j)) for i, j in np.argwhere(mask)]


def fit_cd(
    prob: MLMProblem,
    lam: float,
    config: SolverConfig,
    B_init: Optional[Coefficients] = None,
) -> FitResult:
    """
    Coordinate descent with warm start and the active-set strategy.

    One full sweep is followed by sweeps over the nonzero coordinates only
    until they settle, then another full sweep; this repeats until a full
    sweep changes nothing beyond tol. Random order draws a fresh seeded
    permutation for every sweep.

    Args:
        prob: Problem to fit
        lam: Penalty (>= 0)
        config: Solver settings; algorithm cd_cyclic or cd_random
        B_init: Warm start, zero matrix when None

    Returns:
        FitResult; converged=False when max_iter sweeps ran out
    """
    B = initial_coefficients(prob, lam, B_init)
    sweeper = CoordinateSweeper(prob, B, lam)
    state = FitState(B_hat=B, B_prev=B.copy(), R=sweeper.R)
    randomize = Algorithm(config.algorithm) is Algorithm.CD_RANDOM
    rng = np.random.default_rng(config.rng_seed)
    all_coords = coordinate_list(np.ones((prob.p, prob.q), dtype=bool))

    def run_sweep(coords: List[Coordinate]) -> None:
        if randomize:
            coords = [coords[k] for k in rng.permutation(len(coords))]
        state.B_prev = B.copy()
        sweeper.sweep(coords)
        state.k += 1

    is_converged = False
    while state.k < config.max_iter:
        run_sweep(all_coords)
        if converged(state, config):
            is_converged = True
            break
        if not config.active_set:
            continue
        while state.k < config.max_iter:
            active = coordinate_list(B != 0)
            if not active:
                break
            run_sweep(active)
            if converged(state, config):
                break

    return finish(prob, lam, config, state, B.copy(), is_converged)
