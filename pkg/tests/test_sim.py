import numpy as np
import pytest
from numpy.testing import assert_allclose

from sparsemlm.app_types import EnviroLayout, PathFit, SimSpec
from sparsemlm.core.oracle import least_squares_oracle
from sparsemlm.errors import DataError
from sparsemlm.settings import SolverConfig
from sparsemlm.sim import (
    roc_from_path,
    roc_from_points,
    roc_from_scores,
    roc_point,
    screening_rocs,
    simulate_enviro,
    simulate_mlm,
    timing_grid,
    timing_ratio_table,
    univariate_baseline,
    univariate_flags,
    univariate_pvalues,
)
from sparsemlm.sim.generators import enviro_column_design
from sparsemlm.sim.screening import auc_table, default_hit_counts
from sparsemlm.sim.univariate import hit_scores, interaction_truth
from sparsemlm.sim.timing import TIMING_COLUMNS


def test_simulate_mlm_shapes_and_seed():
    spec = SimSpec(n=20, m=15, p=4, q=3, seed=1)
    first = simulate_mlm(spec)
    second = simulate_mlm(spec)
    other = simulate_mlm(SimSpec(n=20, m=15, p=4, q=3, seed=2))
    assert first.prob.Y.shape == (20, 15)
    assert first.B_true.shape == (5, 4)
    assert np.array_equal(first.prob.Y, second.prob.Y)
    assert np.array_equal(first.B_true.values, second.B_true.values)
    assert not np.array_equal(first.prob.Y, other.prob.Y)
    assert first.B_true.values[0, 0] != 0.0


def test_zero_rates_leave_only_the_corner():
    sim = simulate_mlm(SimSpec(n=10, m=10, p=3, q=3, frac_main_nonzero=0.0, frac_inter_nonzero=0.0))
    nonzero = np.argwhere(sim.B_true.values != 0).tolist()
    assert nonzero == [[0, 0]]


def test_interaction_share_averages_one_in_eight():
    shares = [
        np.mean(simulate_mlm(SimSpec(n=5, m=5, p=10, q=10, seed=seed)).B_true.values[1:, 1:] != 0)
        for seed in range(100)
    ]
    assert np.mean(shares) == pytest.approx(0.125, abs=0.02)


def test_noiseless_dense_recovery():
    spec = SimSpec(n=30, m=25, p=3, q=2, frac_main_nonzero=1.0, frac_inter_nonzero=1.0, noise_sd=1e-12, seed=4)
    sim = simulate_mlm(spec)
    assert_allclose(least_squares_oracle(sim.prob).values, sim.B_true.values, atol=1e-6)


def test_sim_spec_is_validated():
    with pytest.raises(ValueError):
        SimSpec(n=1, m=5, p=2, q=2)
    with pytest.raises(ValueError):
        SimSpec(n=5, m=5, p=2, q=2, frac_main_nonzero=1.5)
    with pytest.raises(ValueError):
        SimSpec(n=5, m=5, p=2, q=2, noise_sd=0.0)


def test_enviro_layout_and_column_design():
    layout = EnviroLayout(n_chem=3, n_tissue=2, n_demog=2)
    design = enviro_column_design(layout)
    assert design.shape == (6, 2 + 3 + 6)
    # response 3 is chemical 1 in tissue 1
    assert design[3, 1] == 1.0 and design[3, 0] == 0.0
    assert design[3, 2 + 1] == 1.0
    assert design[3, 5 + 3] == 1.0
    assert layout.tissue_cols.tolist() == [1, 2]
    assert layout.chem_cols.tolist() == [3, 4, 5]
    assert layout.combo_cols.tolist() == list(range(6, 12))


def test_simulate_enviro_structure():
    sim = simulate_enviro(n_chem=4, n_tissue=3, n_subjects=20, n_demog=3, seed=2)
    prob, B_true, layout = sim
    assert prob.Y.shape == (20, 12)
    assert prob.p == 4
    assert prob.q == 1 + 3 + 4 + 12
    assert np.all(B_true.values[:, layout.combo_cols] == 0.0)
    assert B_true.values[0, 0] != 0.0
    assert prob.x_labels[1] == "demog1"
    assert prob.z_labels[-1] == "chem4:tissue3"
    mask = layout.interaction_mask(B_true.shape)
    assert mask.sum() == 3 * 4
    with pytest.raises(ValueError):
        simulate_enviro(n_chem=1, n_tissue=3, n_subjects=20, n_demog=3)


def test_roc_point_and_canonical_curve():
    truth = np.array([True, True, False, False])
    assert roc_point(np.array([True, False, True, False]), truth) == (0.5, 0.5)
    curve = roc_from_points([(0.5, 0.4), (0.25, 0.6)])
    assert curve.fpr[0] == 0.0 and curve.fpr[-1] == 1.0
    assert np.all(np.diff(curve.tpr) >= 0)
    assert curve.tpr.tolist() == [0.0, 0.6, 0.6, 1.0]


def test_roc_needs_both_classes():
    with pytest.raises(DataError):
        roc_point(np.array([True]), np.array([True]))


def test_roc_from_scores_extremes():
    truth = np.array([True, True, False, False, False])
    perfect = roc_from_scores(np.array([0.9, 0.8, 0.1, 0.2, 0.3]), truth)
    assert perfect.auc == pytest.approx(1.0)
    inverted = roc_from_scores(np.array([0.1, 0.2, 0.9, 0.8, 0.7]), truth)
    assert inverted.auc == pytest.approx(0.0)
    tied = roc_from_scores(np.zeros(5), truth)
    assert tied.auc == pytest.approx(0.5)


def test_scores_unrelated_to_truth_give_chance_auc():
    aucs = []
    for seed in range(50):
        B_true = simulate_mlm(SimSpec(n=5, m=5, p=10, q=10, seed=seed)).B_true.values[1:, 1:]
        scores = np.abs(np.random.default_rng(1000 + seed).normal(size=B_true.shape))
        aucs.append(roc_from_scores(scores.ravel(), B_true.ravel() != 0).auc)
    assert np.mean(aucs) == pytest.approx(0.5, abs=0.05)


def test_roc_from_path_uses_selected_entries(make_problem, tight):
    from sparsemlm.tuning import default_lambda_path, fit_path

    prob = make_problem(n=9, m=8, p_raw=3, q_raw=3, seed=6)
    path_fit = fit_path(prob, default_lambda_path(prob, n_lambda=6), tight("cd_cyclic"))
    B_true = np.zeros((prob.p, prob.q))
    B_true[1, 1] = B_true[2, 3] = 1.0
    roc = roc_from_path(path_fit, B_true, prob.mask)
    assert 0.0 <= roc.auc <= 1.0
    assert roc.fpr[0] == 0.0 and roc.tpr[-1] == 1.0
    empty = PathFit(lambdas=path_fit.lambdas[:1], fits=path_fit.fits[:1])
    assert roc_from_path(empty, B_true, prob.mask).auc == pytest.approx(0.5)


def test_univariate_pvalues_and_hits():
    sim = simulate_enviro(n_chem=4, n_tissue=3, n_subjects=30, n_demog=2, seed=3)
    pvalues = univariate_pvalues(sim.prob)
    assert pvalues.shape == (2, 12)
    assert np.all((pvalues >= 0) & (pvalues <= 1))
    one = hit_scores(pvalues, sim.layout, 1)
    two = hit_scores(pvalues, sim.layout, 2)
    assert one.shape == (2, 4)
    assert np.all(one <= two)
    assert_allclose(one[0, 1], pvalues[0, 3:6].min())
    with pytest.raises(ValueError):
        hit_scores(pvalues, sim.layout, 4)


def test_univariate_flags_cutoffs():
    scores = np.array([[0.01, 0.2], [0.5, 1.0]])
    assert univariate_flags(scores, 1.0).all()
    assert univariate_flags(scores, 0.2).tolist() == [[True, False], [False, False]]


def test_univariate_baseline_curves():
    sim = simulate_enviro(n_chem=6, n_tissue=3, n_subjects=40, n_demog=3, seed=5, frac_inter_nonzero=0.3)
    truth = interaction_truth(sim.B_true, sim.layout)
    if truth.all() or not truth.any():
        pytest.skip("degenerate draw")
    hits = univariate_baseline(sim.prob, sim.B_true, sim.layout, hits_needed=1)
    pooled = univariate_baseline(sim.prob, sim.B_true, sim.layout, hits_needed=None)
    assert 0.0 <= hits.auc <= 1.0
    assert 0.0 <= pooled.auc <= 1.0


def test_default_hit_counts():
    assert default_hit_counts(10) == [1, 2, 4, 6, 8]
    assert default_hit_counts(2) == [1, 2]


def test_screening_rocs_small():
    sim = simulate_enviro(n_chem=6, n_tissue=3, n_subjects=40, n_demog=3, seed=1, frac_inter_nonzero=0.3)
    rocs = screening_rocs(sim, SolverConfig(algorithm="fista_backtrack"), n_lambda=10, hit_counts=[1, 2])
    assert set(rocs) == {"mlm", "univariate", "univariate_hits1", "univariate_hits2"}
    table = auc_table(rocs)
    assert table["method"].tolist() == list(rocs)


def test_timing_grid_and_ratio():
    configs = [SolverConfig(algorithm="fista_backtrack"), SolverConfig(algorithm="admm")]
    timings = timing_grid([(20, 15, 3, 2)], configs, n_reps=2, seed=0, n_lambda=4)
    assert timings.columns.tolist() == TIMING_COLUMNS
    assert len(timings) == 4
    assert (timings["seconds"] > 0).all()
    ratios = timing_ratio_table(timings)
    assert len(ratios) == 1
    row = ratios.iloc[0]
    assert row["ratio"] == pytest.approx(row["fista_backtrack"] / row["admm"])
    with pytest.raises(ValueError):
        timing_ratio_table(timings, numerator="ista")


@pytest.mark.slow
def test_mlm_beats_univariate_screening_at_desk_scale():
    config = SolverConfig(algorithm="fista_backtrack")
    mlm, univariate = [], []
    for seed in range(10):
        sim = simulate_enviro(n_chem=30, n_tissue=5, n_subjects=60, n_demog=10, seed=seed)
        rocs = screening_rocs(sim, config, n_lambda=50, hit_counts=[1])
        mlm.append(rocs["mlm"].auc)
        univariate.append(rocs["univariate_hits1"].auc)
    assert np.mean(mlm) - np.mean(univariate) >= 0.05


@pytest.mark.slow
def test_full_scale_screening_auc():
    sim = simulate_enviro(n_chem=100, n_tissue=10, n_subjects=108, n_demog=19, seed=0)
    rocs = screening_rocs(sim, SolverConfig(algorithm="fista_backtrack"), n_lambda=50, hit_counts=[1])
    assert 0.82 <= rocs["mlm"].auc <= 0.93


@pytest.mark.slow
def test_fista_admm_ratio_falls_as_p_and_q_grow():
    configs = [SolverConfig(algorithm="fista_backtrack"), SolverConfig(algorithm="admm")]
    timings = timing_grid([(300, 300, 50, 50), (300, 300, 250, 250)], configs, n_lambda=20)
    ratios = timing_ratio_table(timings).set_index("p")["ratio"]
    assert ratios[50] > ratios[250]


@pytest.mark.slow
def test_solver_speed_ordering():
    configs = [
        SolverConfig(algorithm=name)
        for name in ("cd_cyclic", "cd_random", "ista", "fista_fixed", "fista_backtrack", "admm")
    ]
    timings = timing_grid([(300, 300, 30, 30)], configs, n_lambda=50)
    seconds = timings.set_index("algorithm")["seconds"]
    assert seconds["cd_cyclic"] > seconds["ista"]
    assert seconds["cd_random"] > seconds["ista"]
    for name in ("fista_fixed", "fista_backtrack", "admm"):
        assert seconds[name] < seconds["ista"]
