"""Test data models."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.models import (
    AucCurve,
    BiasRow,
    BiasTable,
    CascadeReport,
    EstimateConfig,
    EstimateReport,
    ExposureVector,
    Graph,
    LatentConfig,
    LatentFactors,
    NodeCovariances,
    OmegaMatrix,
    Resident,
    ResidentPanel,
    StudyConfig,
)


class TestGraph:
    """Test Graph validation and helpers."""

    def test_density_and_degrees(self):
        """Test density counts positive off-diagonal pairs."""
        graph = Graph(weights=[[0, 2, 0], [2, 0, 1], [0, 1, 0]])
        assert graph.n == 3
        assert graph.density == pytest.approx(4 / 6)
        assert list(graph.degrees) == [2.0, 3.0, 1.0]

    def test_rejects_negative_weights(self):
        """Test negative weights are refused."""
        with pytest.raises(ValidationError):
            Graph(weights=[[0, -1], [-1, 0]])

    def test_rejects_nonzero_diagonal(self):
        """Test self-loops are refused."""
        with pytest.raises(ValidationError):
            Graph(weights=[[1, 0], [0, 0]])

    def test_rejects_asymmetric_undirected(self):
        """Test undirected weights must be symmetric."""
        with pytest.raises(ValidationError):
            Graph(weights=[[0, 1], [0, 0]])

    def test_directed_symmetrized(self):
        """Test a directed graph sums both directions when symmetrized."""
        graph = Graph(weights=[[0, 1], [3, 0]], directed=True)
        assert graph.symmetrized().weights.tolist() == [[0, 4], [4, 0]]

    def test_binarized(self):
        """Test positive weights map to one."""
        graph = Graph(weights=[[0, 5], [5, 0]]).binarized()
        assert graph.weights.tolist() == [[0, 1], [1, 0]]

    def test_positive_weights_upper_triangle(self):
        """Test each undirected edge is listed once."""
        graph = Graph(weights=[[0, 2, 0], [2, 0, 1], [0, 1, 0]])
        assert sorted(graph.positive_weights().tolist()) == [1.0, 2.0]


class TestLatentModels:
    """Test latent configuration and factors."""

    def test_factors_norm_bound(self):
        """Test rows longer than sqrt(scale) are refused."""
        with pytest.raises(ValidationError):
            LatentFactors(values=[[1.2, 0.0]], scale=1.0)

    def test_probabilities(self):
        """Test P = U U^T."""
        factors = LatentFactors(values=[[0.5, 0.5], [0.5, 0.0]])
        assert factors.probabilities()[0, 1] == pytest.approx(0.25)

    def test_config_probs_sum_to_one(self):
        """Test cluster probabilities must sum to one."""
        with pytest.raises(ValidationError):
            LatentConfig(n=10, d=2, kind="sbm", cluster_directions=[[0.5, 0.1], [0.1, 0.5]],
                         cluster_probs=[0.5, 0.6])

    def test_config_n_at_least_d(self):
        """Test n below d is refused."""
        with pytest.raises(ValidationError):
            LatentConfig(n=1, d=2, kind="rdpg-generic")


class TestCovarianceModels:
    """Test NodeCovariances and OmegaMatrix."""

    def test_node_covariances_total(self):
        """Test total sums the per-node matrices."""
        cov = NodeCovariances(per_node=np.stack([np.eye(2), 2 * np.eye(2)]), variant="rdpg-plugin")
        assert cov.n == 2 and cov.d == 2
        assert np.allclose(cov.total(), 3 * np.eye(2))

    def test_node_covariances_psd(self):
        """Test indefinite per-node matrices are refused."""
        with pytest.raises(ValidationError):
            NodeCovariances(per_node=[[[1.0, 0.0], [0.0, -1.0]]], variant="rdpg-plugin")

    def test_omega_zero_outside_latent_block(self):
        """Test Omega may only be nonzero in the latent block."""
        matrix = np.zeros((3, 3))
        matrix[2, 2] = 1.0
        with pytest.raises(ValidationError):
            OmegaMatrix(matrix=matrix, d_latent=1)

    def test_omega_latent_block(self):
        """Test the latent block accessor."""
        matrix = np.zeros((3, 3))
        matrix[:2, :2] = np.eye(2)
        omega = OmegaMatrix(matrix=matrix, d_latent=2)
        assert np.array_equal(omega.latent_block, np.eye(2))

    def test_auc_curve_choice_must_be_candidate(self):
        """Test chosen_d must be one of the candidates."""
        with pytest.raises(ValidationError):
            AucCurve(dims=[1, 2], auc=[0.7, 0.8], chosen_d=3)


class TestPanelModels:
    """Test residents, panels and exposures."""

    def test_stay_limits(self):
        """Test stays must be positive and at most 180 days."""
        with pytest.raises(ValidationError):
            Resident(id="a", entry_day=0, exit_day=0, graduated=1, age=30, white=1, lsi=20)
        with pytest.raises(ValidationError):
            Resident(id="a", entry_day=0, exit_day=181, graduated=1, age=30, white=1, lsi=20)

    def test_unique_ids(self):
        """Test duplicate ids are refused."""
        resident = Resident(id="a", entry_day=0, exit_day=10, graduated=1, age=30, white=1, lsi=20)
        with pytest.raises(ValidationError):
            ResidentPanel(residents=[resident, resident])

    def test_exposure_round_trip_with_missing(self):
        """Test NaN marks a missing exposure."""
        vector = ExposureVector.from_array(["a", "b"], np.array([0.25, np.nan]), "def1")
        assert vector.values == [0.25, None]
        assert vector.present().tolist() == [True, False]
        assert np.isnan(vector.as_array()[1])

    def test_exposure_range(self):
        """Test exposures outside [0, 1] are refused."""
        with pytest.raises(ValidationError):
            ExposureVector(ids=["a"], values=[1.5], definition="def1")


class TestConfigs:
    """Test configuration models."""

    def test_estimate_config_sbm_needs_clusters(self):
        """Test the sbm estimator requires k_clusters."""
        with pytest.raises(ValidationError):
            EstimateConfig(covariance="sbm")
        assert EstimateConfig(covariance="sbm", k_clusters=3).k_clusters == 3

    def test_study_config_rejects_nonfinite_rho(self):
        """Test rho must be finite."""
        with pytest.raises(ValidationError):
            StudyConfig(study="A", sweep=[100], beta=[1, 3], rho=float("nan"))


class TestResults:
    """Test result models."""

    def _report(self):
        return EstimateReport(
            coefficients={"u1": 0.1, "intercept": 1.0, "peer_grad": 0.4},
            std_errors={"u1": 0.01, "intercept": 0.1, "peer_grad": 0.05},
            peer_columns=["peer_grad"],
            latent_columns=["u1"],
            method="bias-corrected",
            n_obs=50,
            condition_number=12.0,
        )

    def test_rho_and_csv_row(self):
        """Test the first peer column is rho and the CSV row is flat."""
        report = self._report()
        assert report.rho == 0.4
        assert report.rho_se == 0.05
        row = report.csv_row()
        assert list(row)[:4] == ["specification", "method", "n_obs", "condition_number"]
        assert row["coef_peer_grad"] == 0.4 and row["se_u1"] == 0.01

    def test_report_rejects_negative_se(self):
        """Test standard errors must be nonnegative."""
        with pytest.raises(ValidationError):
            EstimateReport(coefficients={"a": 1.0}, std_errors={"a": -1.0}, method="ols",
                           n_obs=3, condition_number=1.0)

    def test_bias_table_lookup(self):
        """Test rows are found by sweep value and method."""
        table = BiasTable(study="A", rho=0.3, rows=[
            BiasRow(sweep=100, method="no-latent", mean_rho_hat=0.5, bias=0.2, mc_se=0.01, reps=10),
            BiasRow(sweep=100, method="bias-corrected", mean_rho_hat=0.31, bias=0.01, mc_se=0.01, reps=10),
        ])
        assert table.row(100, "no-latent").bias == 0.2
        assert table.methods() == ["no-latent", "bias-corrected"]
        with pytest.raises(KeyError):
            table.row(200, "no-latent")

    def test_bias_table_unique_rows(self):
        """Test duplicate (sweep, method) rows are refused."""
        row = BiasRow(sweep=100, method="no-latent", mean_rho_hat=0.5, bias=0.2, mc_se=0.0, reps=1)
        with pytest.raises(ValidationError):
            BiasTable(study="A", rho=0.3, rows=[row, row])

    def test_cascade_counts_bounded(self):
        """Test treated counts cannot exceed n."""
        with pytest.raises(ValidationError):
            CascadeReport(label="x", targeting="true-failures", buddy_weight=1.0, threshold=0.5,
                          targeted_count=1, treated_count=5, failures_true=1,
                          below_threshold_pre=1, below_threshold_post=1, n=3)
