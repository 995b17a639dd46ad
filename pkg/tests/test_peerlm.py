"""Test design matrices and outcome model estimators."""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.special import expit

from src.errors import OverCorrectionError, RankDeficiencyError, SeparationError
from src.models import ExposureVector, OmegaMatrix, Resident, ResidentPanel
from src.peerlm import (
    DesignMatrix,
    build_design,
    fit_bias_corrected,
    fit_logistic_ame,
    fit_ols,
    predict,
    race_design,
    simulation_design,
    tc_design,
)
from src.simlab import known_error_trial
from src.utils import make_rng


def linear_data(n=300, seed=0):
    rng = make_rng(seed)
    uhat = rng.normal(size=(n, 2))
    peer = rng.random(n)
    y = 0.5 + 0.8 * peer + uhat @ np.array([1.0, -0.5]) + rng.normal(0, 0.1, n)
    return build_design({"peer": peer}, uhat=uhat, peer_columns=["peer"]), y


def zero_omega(design):
    size = design.d + design.q
    return OmegaMatrix(matrix=np.zeros((size, size)), d_latent=design.d)


def tiny_panel():
    residents = [
        Resident(id=f"r{k}", entry_day=k, exit_day=k + 30, graduated=k % 2,
                 age=20.0 + k, white=int(k % 3 == 0), lsi=10.0 + 2 * k)
        for k in range(12)
    ]
    return ResidentPanel(residents=residents)


class TestDesign:
    """Test design matrix construction."""

    def test_latent_block_first(self):
        """Test labels put u1..ud before the intercept."""
        design, _ = linear_data()
        assert design.labels == ["u1", "u2", "intercept", "peer"]
        assert design.matrix().shape == (300, 4)

    def test_peer_bounds(self):
        """Test peer columns outside [0, 1] are refused."""
        with pytest.raises(ValidationError):
            build_design({"peer": np.array([0.2, 1.4, 0.5])}, peer_columns=["peer"])

    def test_simulation_design_unbounded(self):
        """Test the simulation design accepts any lagged peer average."""
        design = simulation_design(np.array([1.0, -2.0, 3.0]), np.array([-4.0, 5.0, 0.0]))
        assert design.labels == ["intercept", "y_lag", "peer_lag"]
        assert design.peer_columns == ["peer_lag"]

    def test_with_column_and_latent(self):
        """Test copies replace one column or the latent block."""
        design, _ = linear_data(n=20)
        replaced = design.with_column("peer", np.zeros(20))
        assert np.all(replaced.column("peer") == 0)
        assert design.with_latent(None).labels == ["intercept", "peer"]

    def test_tc_design_drops_missing(self):
        """Test residents without an exposure are left out."""
        panel = tiny_panel()
        values = np.linspace(0, 1, 12)
        values[[0, 5]] = np.nan
        exposure = ExposureVector.from_array(panel.ids, values, "def1")
        design, mask = tc_design(panel, exposure, np.ones((12, 1)) * 0.3)
        assert mask.sum() == 10 and design.n == 10
        assert design.labels == ["u1", "intercept", "peer_grad", "age", "white", "lsi"]

    def test_race_design_layout(self):
        """Test the race-interaction columns and complete cases."""
        panel = tiny_panel()
        white = ExposureVector.from_array(panel.ids, np.full(12, 0.5), "def1-white")
        nonwhite_values = np.full(12, 0.25)
        nonwhite_values[3] = np.nan
        nonwhite = ExposureVector.from_array(panel.ids, nonwhite_values, "def1-nonwhite")
        design, mask = race_design(panel, white, nonwhite)
        assert design.w_labels == [
            "intercept", "peer_grad_white", "peer_grad_nonwhite",
            "peer_grad_white_x_white", "peer_grad_nonwhite_x_white", "age", "white", "lsi",
        ]
        assert design.n == 11 and not mask[3]
        assert np.allclose(design.column("peer_grad_white_x_white"),
                           0.5 * design.column("white"))


class TestOls:
    """Test ordinary least squares."""

    def test_matches_lstsq(self):
        """Test coefficients equal a direct least-squares solve."""
        design, y = linear_data()
        report = fit_ols(design, y)
        expected, *_ = np.linalg.lstsq(design.matrix(), y, rcond=None)
        assert np.allclose(list(report.coefficients.values()), expected, atol=1e-10)
        assert report.method == "homophily-ols"
        assert report.n_obs == 300

    def test_method_without_latent(self):
        """Test a design without a latent block is plain OLS."""
        design, y = linear_data()
        assert fit_ols(design.with_latent(None), y).method == "ols"

    def test_rank_deficiency_names_columns(self):
        """Test duplicated predictors are reported by name."""
        rng = make_rng(1)
        z = rng.random(50)
        design = build_design({"a": z, "b": 2 * z})
        with pytest.raises(RankDeficiencyError) as info:
            fit_ols(design, rng.random(50))
        assert set(info.value.columns) & {"a", "b"}

    def test_predict_linear(self):
        """Test predictions equal X c."""
        design, y = linear_data(n=60)
        report = fit_ols(design, y)
        fitted = predict(report, design)
        coefficients = np.array([report.coefficients[label] for label in design.labels])
        assert np.allclose(fitted, design.matrix() @ coefficients)

    def test_scale_equivariance(self):
        """Test scaling y scales coefficients and standard errors."""
        design, y = linear_data()
        omega = OmegaMatrix(matrix=np.diag([2.0, 1.0, 0.0, 0.0]), d_latent=2)
        for fit in (lambda target: fit_ols(design, target),
                    lambda target: fit_bias_corrected(design, target, omega)):
            base, scaled = fit(y), fit(-2.5 * y)
            for label in design.labels:
                assert scaled.coefficients[label] == pytest.approx(-2.5 * base.coefficients[label])
                assert scaled.std_errors[label] == pytest.approx(2.5 * base.std_errors[label])

    def test_row_order_irrelevant(self):
        """Test permuting observations leaves every estimate unchanged."""
        design, y = linear_data()
        order = make_rng(9).permutation(design.n)
        permuted = build_design({"peer": design.column("peer")[order]}, uhat=design.uhat[order],
                                peer_columns=["peer"])
        omega = OmegaMatrix(matrix=np.diag([2.0, 1.0, 0.0, 0.0]), d_latent=2)
        pairs = [
            (fit_ols(design, y), fit_ols(permuted, y[order])),
            (fit_bias_corrected(design, y, omega), fit_bias_corrected(permuted, y[order], omega)),
        ]
        for original, shuffled in pairs:
            for label in design.labels:
                assert shuffled.coefficients[label] == pytest.approx(original.coefficients[label], abs=1e-10)
                assert shuffled.std_errors[label] == pytest.approx(original.std_errors[label], rel=1e-8)


class TestBiasCorrected:
    """Test the measurement-error corrected estimator."""

    def test_zero_omega_equals_ols(self):
        """Test Omega = 0 reproduces OLS."""
        design, y = linear_data()
        corrected = fit_bias_corrected(design, y, zero_omega(design))
        ols = fit_ols(design, y)
        for label in design.labels:
            assert corrected.coefficients[label] == pytest.approx(ols.coefficients[label], abs=1e-12)
            assert corrected.std_errors[label] == pytest.approx(ols.std_errors[label], rel=1e-10)

    def test_matches_normal_equations(self):
        """Test the QR solve equals (X^T X - Omega)^{-1} X^T y."""
        design, y = linear_data()
        size = design.d + design.q
        matrix = np.zeros((size, size))
        matrix[:2, :2] = [[3.0, 0.5], [0.5, 2.0]]
        omega = OmegaMatrix(matrix=matrix, d_latent=2)
        x = design.matrix()
        expected = np.linalg.solve(x.T @ x - matrix, x.T @ y)
        report = fit_bias_corrected(design, y, omega)
        assert np.allclose(list(report.coefficients.values()), expected, rtol=1e-9)

    def test_over_correction(self):
        """Test Omega larger than the Gram matrix is refused."""
        design, y = linear_data(n=50)
        size = design.d + design.q
        matrix = np.zeros((size, size))
        matrix[:2, :2] = 1e6 * np.eye(2)
        with pytest.raises(OverCorrectionError):
            fit_bias_corrected(design, y, OmegaMatrix(matrix=matrix, d_latent=2))

    def test_known_error_improves_estimates(self):
        """Test correcting a known measurement error moves coefficients toward the truth."""
        wins = sum(
            trial["corrected_error"] < trial["uncorrected_error"]
            for trial in (known_error_trial(n=400, seed=seed) for seed in range(50))
        )
        assert wins >= 45


class TestLogisticAme:
    """Test the logistic average-marginal-effect fit."""

    def _data(self, n=5000, seed=2):
        rng = make_rng(seed)
        peer = rng.random(n)
        flag = (rng.random(n) < 0.5).astype(float)
        logits = -0.5 + 1.2 * peer + 0.7 * flag
        s = (rng.random(n) < expit(logits)).astype(float)
        return build_design({"peer": peer, "flag": flag}, peer_columns=["peer"]), s

    def test_recovers_logit_coefficients(self):
        """Test raw logit coefficients are close to the generating values."""
        design, s = self._data()
        report = fit_logistic_ame(design, s)
        logits = report.details["logit_coefficients"]
        assert logits["peer"] == pytest.approx(1.2, abs=0.3)
        assert logits["flag"] == pytest.approx(0.7, abs=0.2)
        assert report.method == "logistic-ame"

    def test_marginal_effects(self):
        """Test the AME formulas for continuous and binary columns."""
        design, s = self._data()
        report = fit_logistic_ame(design, s)
        logits = report.details["logit_coefficients"]
        beta = np.array([logits[label] for label in design.labels])
        x = design.matrix()
        mu = expit(x @ beta)
        assert report.coefficients["peer"] == pytest.approx(np.mean(mu * (1 - mu)) * beta[1])
        high, low = x.copy(), x.copy()
        high[:, 2], low[:, 2] = 1.0, 0.0
        assert report.coefficients["flag"] == pytest.approx(np.mean(expit(high @ beta) - expit(low @ beta)))

    def test_predict_probabilities(self):
        """Test predictions of a logistic report are probabilities."""
        design, s = self._data(n=500)
        fitted = predict(fit_logistic_ame(design, s), design)
        assert fitted.min() > 0 and fitted.max() < 1

    def test_separation(self):
        """Test perfectly separated outcomes are flagged."""
        z = np.concatenate([np.linspace(-1.5, -0.5, 40), np.linspace(0.5, 1.5, 40)])
        s = (z > 0).astype(float)
        with pytest.raises(SeparationError):
            fit_logistic_ame(build_design({"z": z}, peer_columns=[]), s)

    def test_intercept_only(self):
        """Test the intercept-only fit predicts the sample mean."""
        s = (make_rng(4).random(300) < 0.35).astype(float)
        design = DesignMatrix(w=np.ones((300, 1)), w_labels=["intercept"], peer_bounds=None)
        fitted = predict(fit_logistic_ame(design, s), design)
        assert np.allclose(fitted, s.mean(), atol=1e-8)

    def test_close_to_oracle_effects(self):
        """Test AMEs lie within 3 SE of the effects implied by the true coefficients."""
        design, s = self._data(n=2000, seed=6)
        report = fit_logistic_ame(design, s)
        x = design.matrix()
        beta = np.array([-0.5, 1.2, 0.7])
        mu = expit(x @ beta)
        high, low = x.copy(), x.copy()
        high[:, 2], low[:, 2] = 1.0, 0.0
        oracle = {
            "peer": np.mean(mu * (1 - mu)) * beta[1],
            "flag": np.mean(expit(high @ beta) - expit(low @ beta)),
        }
        for label, value in oracle.items():
            assert abs(report.coefficients[label] - value) <= 3 * report.std_errors[label]
