"""Test the outcome panel, study presets and the Monte Carlo runner."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import ConfigError
from src.models import Graph, LatentFactors
from src.simlab import (
    METHODS,
    STUDIES,
    get_study,
    known_error_trial,
    row_normalize,
    run_replicate,
    run_study,
    simulate_panel,
    single_node_trial,
    study_config,
    study_methods,
    summarize,
    sweep_range,
)


def small_study(name="A", **overrides):
    fields = {"sweep": [60.0], "reps": 3, "seed": 4}
    fields.update(overrides)
    return study_config(name, **fields)


class TestPanel:
    """Test the network autoregressive panel."""

    def test_row_normalize(self):
        """Test rows sum to one and isolated rows stay zero."""
        graph = Graph(weights=[[0, 2, 1, 0], [2, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]])
        normalized = row_normalize(graph)
        assert np.allclose(normalized.sum(axis=1), [1, 1, 1, 0])
        assert normalized[0, 1] == pytest.approx(2 / 3)

    def test_lagged_peer_average(self):
        """Test the lagged peer term is L Y2."""
        factors = LatentFactors(values=np.full((30, 2), 0.4))
        graph = Graph(weights=np.ones((30, 30)) - np.eye(30))
        outcomes = simulate_panel(factors, graph, small_study(), seed=1)
        assert np.allclose(outcomes.lagged_peer, row_normalize(graph) @ outcomes.y2)

    def test_deterministic(self):
        """Test equal seeds give equal panels."""
        factors = LatentFactors(values=np.full((20, 2), 0.4))
        graph = Graph(weights=np.ones((20, 20)) - np.eye(20))
        first = simulate_panel(factors, graph, small_study(), seed=7)
        second = simulate_panel(factors, graph, small_study(), seed=7)
        assert np.array_equal(first.y3, second.y3)

    def test_beta_dimension_mismatch(self):
        """Test beta must match the latent dimension."""
        factors = LatentFactors(values=np.full((10, 1), 0.4))
        graph = Graph(weights=np.ones((10, 10)) - np.eye(10))
        with pytest.raises(ConfigError):
            simulate_panel(factors, graph, small_study(), seed=0)


class TestStudies:
    """Test the study presets."""

    def test_all_studies_registered(self):
        """Test studies A to D exist with descriptions."""
        assert list(STUDIES) == ["A", "B", "C", "D"]
        assert all(study.description for study in STUDIES.values())

    def test_presets(self):
        """Test the default parameters of each study."""
        a, b, c, d = (study_config(name) for name in "ABCD")
        assert a.sweep == [100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0]
        assert a.beta == [1.0, 3.0] and a.density == 0.20
        assert b.n == 200 and b.sweep[0] == 0.05 and b.sweep[-1] == 0.40
        assert c.covariance == "sbm" and c.k_clusters == 4
        assert d.sweep[0] == -1.0 and d.sweep[-1] == 1.0 and len(d.sweep) == 9
        assert a.alpha == 0.6 and a.rho == 0.3 and a.reps == 200

    def test_overrides_ignore_none(self):
        """Test None overrides keep the preset."""
        cfg = study_config("B", reps=5, n=None)
        assert cfg.reps == 5 and cfg.n == 200

    def test_study_d_multiplier_follows_sweep(self):
        """Test study D uses the sweep value as m."""
        cfg = study_config("D")
        assert get_study("D").multiplier(cfg, -0.25) == -0.25
        assert get_study("A").multiplier(cfg, -0.25) == cfg.beta_prev_multiplier

    def test_size_sweep_must_be_integer(self):
        """Test fractional node counts are refused."""
        with pytest.raises(ConfigError):
            get_study("A").latent_config(study_config("A"), 100.5, seed=0)

    def test_unknown_study(self):
        """Test unknown letters are configuration errors."""
        with pytest.raises(ConfigError):
            get_study("E")

    def test_invalid_config(self):
        """Test replicate counts must be positive."""
        with pytest.raises(ValidationError):
            study_config("A", reps=0)

    def test_cluster_estimator_needs_count(self):
        """Test the sbm covariance estimator requires k_clusters."""
        with pytest.raises(ValidationError):
            study_config("A", covariance="sbm")
        assert study_config("A", covariance="sbm", k_clusters=2).k_clusters == 2

    def test_sweep_range(self):
        """Test inclusive grids without floating drift."""
        assert sweep_range(-1.0, 1.0, 0.25) == [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]
        assert sweep_range(0.05, 0.4, 0.05)[-1] == 0.4


class TestRunner:
    """Test replicates and study aggregation."""

    def test_replicate_methods(self):
        """Test a replicate reports every method, the oracle on request."""
        estimates = run_replicate(small_study(include_oracle=True), 60.0, seed=3)
        assert list(estimates) == METHODS + ["oracle"]
        assert all(np.isfinite(value) for value in estimates.values())

    def test_study_methods(self):
        """Test the oracle is listed last when included."""
        assert study_methods(small_study()) == METHODS
        assert study_methods(small_study(include_oracle=True))[-1] == "oracle"

    def test_summarize(self):
        """Test means, biases and Monte Carlo errors per sweep point."""
        cfg = small_study(sweep=[1.0, 2.0], reps=2)
        estimates = [
            {"no-latent": 0.5, "uncorrected-Û": 0.4, "bias-corrected": 0.3},
            {"no-latent": 0.7, "uncorrected-Û": 0.4, "bias-corrected": 0.5},
            {"no-latent": 0.1, "uncorrected-Û": 0.2, "bias-corrected": 0.3},
            {"no-latent": 0.1, "uncorrected-Û": 0.2, "bias-corrected": 0.3},
        ]
        table = summarize(cfg, estimates)
        assert len(table.rows) == 6
        row = table.row(1.0, "no-latent")
        assert row.mean_rho_hat == pytest.approx(0.6)
        assert row.bias == pytest.approx(0.3)
        assert row.mc_se == pytest.approx(np.std([0.5, 0.7], ddof=1) / np.sqrt(2))
        assert table.row(2.0, "bias-corrected").mc_se == 0.0

    def test_study_deterministic(self):
        """Test equal seeds give identical tables."""
        first = run_study(small_study(), show_progress=False)
        second = run_study(small_study(), show_progress=False)
        assert first == second

    def test_workers_do_not_change_results(self):
        """Test the table is independent of the worker count."""
        serial = run_study(small_study(), show_progress=False)
        parallel = run_study(small_study(workers=2), show_progress=False)
        assert serial.rows == parallel.rows

    def test_table_layout(self):
        """Test one row per sweep value and method."""
        table = run_study(small_study(sweep=[50.0, 70.0], reps=2), show_progress=False)
        assert table.sweeps() == [50.0, 70.0]
        assert table.methods() == METHODS
        assert all(row.reps == 2 for row in table.rows)


class TestDeskChecks:
    """Test the measurement-error desk checks at small sizes."""

    def test_single_node_trial(self):
        """Test the one-node trial reports both errors deterministically."""
        first = single_node_trial(n=120, seed=2, redraws=2)
        second = single_node_trial(n=120, seed=2, redraws=2)
        assert first == second
        assert set(first) == {"corrected_error", "uncorrected_error"}
        assert all(np.isfinite(value) and value >= 0 for value in first.values())


def magnitude(table, sweep, method):
    return abs(table.row(sweep, method).bias)


def larger_se(table, sweep, *methods):
    return max(table.row(sweep, method).mc_se for method in methods)


@pytest.mark.slow
class TestStudyAcceptance:
    """Monte Carlo acceptance checks at full replicate counts."""

    def test_study_a(self):
        """Test the size sweep: persistent no-latent bias, vanishing corrected bias, small-n ordering."""
        table = run_study(study_config("A", include_oracle=True, workers=4, seed=1),
                          show_progress=False)
        for sweep in table.sweeps():
            assert magnitude(table, sweep, "no-latent") > 0.05
            oracle = table.row(sweep, "oracle")
            assert abs(oracle.bias) <= 3 * oracle.mc_se
        assert magnitude(table, 800.0, "bias-corrected") <= 0.02
        gap_se = larger_se(table, 100.0, "bias-corrected", "uncorrected-Û")
        assert magnitude(table, 100.0, "uncorrected-Û") - magnitude(table, 100.0, "bias-corrected") > gap_se
        gap_se = larger_se(table, 100.0, "uncorrected-Û", "no-latent")
        assert magnitude(table, 100.0, "no-latent") - magnitude(table, 100.0, "uncorrected-Û") > gap_se

    def test_study_b(self):
        """Test the corrected bias falls with density while the no-latent bias does not comparably."""
        table = run_study(study_config("B", sweep=[0.05, 0.40], workers=4, seed=2),
                          show_progress=False)
        sparse = magnitude(table, 0.05, "bias-corrected")
        dense = magnitude(table, 0.40, "bias-corrected")
        assert sparse - dense > 2 * larger_se(table, 0.05, "bias-corrected")
        assert sparse - dense > 2 * larger_se(table, 0.40, "bias-corrected")
        no_latent_ratio = magnitude(table, 0.40, "no-latent") / magnitude(table, 0.05, "no-latent")
        assert no_latent_ratio > dense / sparse

    def test_study_c(self):
        """Test the four-block study: no-latent biased at every n, corrected unbiased at n = 800."""
        table = run_study(study_config("C", workers=4, seed=3), show_progress=False)
        for sweep in table.sweeps():
            row = table.row(sweep, "no-latent")
            assert abs(row.bias) > 3 * row.mc_se
        assert magnitude(table, 800.0, "bias-corrected") <= 0.02

    def test_study_d(self):
        """Test the uncorrected bias follows m, peaks at m = +-0.25 and is reduced by the correction."""
        table = run_study(study_config("D", workers=4, seed=4), show_progress=False)
        assert np.sign(table.row(-0.25, "uncorrected-Û").bias) != np.sign(table.row(0.25, "uncorrected-Û").bias)
        peak = max(table.sweeps(), key=lambda sweep: magnitude(table, sweep, "uncorrected-Û"))
        assert peak in (-0.25, 0.25)
        for sweep in (-0.25, 0.25):
            assert magnitude(table, sweep, "bias-corrected") < magnitude(table, sweep, "uncorrected-Û")

    def test_single_estimated_node_correction_frequency(self):
        """Test correcting one embedded node wins in at least 90% of 500 trials."""
        wins = sum(
            trial["corrected_error"] < trial["uncorrected_error"]
            for trial in (single_node_trial(n=400, seed=seed) for seed in range(500))
        )
        assert wins >= 450

    def test_known_error_correction_frequency(self):
        """Test the corrected estimate wins in at least 90% of 500 Gaussian-error trials."""
        wins = sum(
            trial["corrected_error"] < trial["uncorrected_error"]
            for trial in (known_error_trial(n=400, seed=seed) for seed in range(500))
        )
        assert wins >= 450
