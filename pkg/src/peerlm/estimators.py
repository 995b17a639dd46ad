"""Least-squares, bias-corrected and logistic outcome model fits."""

from typing import Dict, List, Tuple

import numpy as np
from scipy.linalg import LinAlgError, qr, solve, solve_triangular
from scipy.special import expit

from ..errors import (
    ConfigError,
    ConvergenceError,
    OverCorrectionError,
    RankDeficiencyError,
    SeparationError,
)
from ..models import EstimateReport, OmegaMatrix
from ..utils import CONDITION_LIMIT, condition_number
from .design import INTERCEPT, DesignMatrix

PIVOT_TOLERANCE = 1e-6
LOGIT_TOLERANCE = 1e-10
LOGIT_MAX_ITERATIONS = 100
SEPARATION_LINEAR_PREDICTOR = 35.0


def fit_ols(design: DesignMatrix, y: np.ndarray, specification: str = "main") -> EstimateReport:
    """Ordinary least squares on [U_hat | W] with classical standard errors.

    Solved through a column-pivoted QR factorisation. With a latent block the
    method is reported as ``homophily-ols``.

    Raises:
        RankDeficiencyError: If the Gram matrix is numerically singular
    """
    x, y = _prepare(design, y)
    q, r, pivots, condition = _factorize(x, design.labels)
    coefficients = np.empty(x.shape[1])
    coefficients[pivots] = solve_triangular(r, q.T @ y)

    r_inverse = solve_triangular(r, np.eye(r.shape[0]))
    sigma2 = _residual_variance(x, y, coefficients)
    covariance = _unpivot(r_inverse @ r_inverse.T * sigma2, pivots)
    return _report(
        design, coefficients, covariance,
        method="homophily-ols" if design.uhat is not None else "ols",
        condition=condition,
        specification=specification,
        details={"sigma2": sigma2},
    )


def fit_bias_corrected(
    design: DesignMatrix, y: np.ndarray, omega: OmegaMatrix, specification: str = "main"
) -> EstimateReport:
    """Measurement-error corrected least squares (M_WU - Omega)^{-1} M_Y.

    With X = QR (pivoted), the corrected normal equations become
    R^T (I - K) R c = R^T Q^T y with K = R^{-T} Omega R^{-1}, so
    c = R^{-1} (I - K)^{-1} Q^T y. Standard errors use the sandwich
    (M_WU - Omega)^{-1} M_WU (M_WU - Omega)^{-1} sigma^2.

    Args:
        design: Design with a latent block
        y: Outcome vector
        omega: Correction matrix ordered like ``design.labels``
        specification: Name recorded in the report

    Returns:
        EstimateReport with method ``bias-corrected``

    Raises:
        OverCorrectionError: If M_WU - Omega is not positive definite
    """
    if design.uhat is None:
        raise ConfigError("bias correction needs a design with a latent block")
    p = len(design.labels)
    if omega.matrix.shape != (p, p) or omega.d_latent != design.d:
        raise ConfigError(
            f"Omega of shape {omega.matrix.shape} (latent block {omega.d_latent}) does not "
            f"match the design ({p} columns, latent block {design.d})"
        )

    x, y = _prepare(design, y)
    q, r, pivots, _ = _factorize(x, design.labels)
    r_inverse = solve_triangular(r, np.eye(p))
    shrink = r_inverse.T @ omega.matrix[np.ix_(pivots, pivots)] @ r_inverse
    corrected = np.eye(p) - (shrink + shrink.T) / 2.0

    smallest = float(np.linalg.eigvalsh(corrected).min())
    condition = condition_number(r.T @ corrected @ r)
    if smallest <= 0 or condition >= CONDITION_LIMIT:
        raise OverCorrectionError(
            f"M_WU - Omega is not positive definite (smallest relative eigenvalue {smallest:.3g}); "
            "Omega is too large for this sample, use a larger n or a smaller correction"
        )

    coefficients = np.empty(p)
    coefficients[pivots] = solve_triangular(r, solve(corrected, q.T @ y, assume_a="pos"))
    corrected_inverse = solve(corrected, np.eye(p), assume_a="pos")
    sigma2 = _residual_variance(x, y, coefficients)
    sandwich = r_inverse @ corrected_inverse @ corrected_inverse @ r_inverse.T * sigma2
    return _report(
        design, coefficients, _unpivot(sandwich, pivots),
        method="bias-corrected",
        condition=condition,
        specification=specification,
        details={"sigma2": sigma2, "omega_trace": float(np.trace(omega.matrix))},
    )


def fit_logistic_ame(
    design: DesignMatrix, s_binary: np.ndarray, specification: str = "logistic"
) -> EstimateReport:
    """Logistic regression by IRLS, reported as average marginal effects.

    Continuous columns get mean(mu (1 - mu)) * beta_k; 0/1 columns get the mean
    discrete difference in predicted probability. Standard errors come from the
    delta method. The intercept is reported on the logit scale. Raw logit
    coefficients are kept in ``details``.

    Raises:
        SeparationError: If the linear predictor diverges
        ConvergenceError: If IRLS does not settle within 100 iterations
    """
    x, s = _prepare(design, s_binary)
    if not np.all(np.isin(s, (0.0, 1.0))):
        raise ConfigError("logistic outcome must be 0/1")
    if s.min() == s.max():
        raise ConfigError("logistic outcome needs both classes present")
    _factorize(x, design.labels)

    beta, information, iterations = _irls(x, s)
    covariance = solve(information, np.eye(x.shape[1]), assume_a="pos")
    effects, gradients = _marginal_effects(x, beta, design.labels)
    ame_covariance = gradients @ covariance @ gradients.T

    labels = design.labels
    return _report(
        design, effects, ame_covariance,
        method="logistic-ame",
        condition=condition_number(information),
        specification=specification,
        details={
            "logit_coefficients": dict(zip(labels, map(float, beta))),
            "logit_std_errors": dict(zip(labels, map(float, np.sqrt(np.diag(covariance))))),
            "iterations": iterations,
        },
    )


def predict(report: EstimateReport, design: DesignMatrix) -> np.ndarray:
    """Fitted values of a report on a design with the same columns.

    Linear reports give X c; logistic reports give predicted probabilities.
    """
    if report.labels != design.labels:
        raise ConfigError(f"design columns {design.labels} do not match the report {report.labels}")
    x = design.matrix()
    if report.method == "logistic-ame":
        logits = report.details["logit_coefficients"]
        return expit(x @ np.array([logits[label] for label in report.labels]))
    return x @ np.array([report.coefficients[label] for label in report.labels])


def _prepare(design: DesignMatrix, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = design.matrix()
    y = np.asarray(y, dtype=float)
    if y.shape != (x.shape[0],):
        raise ConfigError(f"outcome has shape {y.shape}, expected ({x.shape[0]},)")
    if not np.all(np.isfinite(y)):
        raise ConfigError("outcome contains NaN or infinite values")
    if x.shape[0] <= x.shape[1]:
        raise ConfigError(f"need more observations ({x.shape[0]}) than columns ({x.shape[1]})")
    return x, y


def _factorize(x: np.ndarray, labels: List[str]) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Pivoted QR with a rank check; returns (Q, R, pivots, Gram condition number)."""
    q, r, pivots = qr(x, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    condition = condition_number(x) ** 2
    if diagonal[0] == 0 or condition >= CONDITION_LIMIT:
        rank = int(np.sum(diagonal > PIVOT_TOLERANCE * diagonal[0])) if diagonal[0] > 0 else 0
        rank = min(rank, len(labels) - 1)
        collinear = [labels[k] for k in pivots[rank:]]
        raise RankDeficiencyError(
            f"design is rank deficient (Gram condition number {condition:.3g}); "
            f"collinear columns: {', '.join(collinear)}",
            columns=collinear,
        )
    return q, r, pivots, condition


def _unpivot(covariance: np.ndarray, pivots: np.ndarray) -> np.ndarray:
    result = np.empty_like(covariance)
    result[np.ix_(pivots, pivots)] = covariance
    return result


def _residual_variance(x: np.ndarray, y: np.ndarray, coefficients: np.ndarray) -> float:
    residuals = y - x @ coefficients
    return float(residuals @ residuals / (x.shape[0] - x.shape[1]))


def _irls(x: np.ndarray, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, int]:
    beta = np.zeros(x.shape[1])
    for iteration in range(1, LOGIT_MAX_ITERATIONS + 1):
        eta = x @ beta
        if np.abs(eta).max() > SEPARATION_LINEAR_PREDICTOR:
            raise SeparationError(
                f"logistic coefficients diverge after {iteration - 1} iterations "
                "(perfect or quasi-perfect separation)"
            )
        mu = expit(eta)
        information = x.T @ (x * (mu * (1.0 - mu))[:, None])
        try:
            step = solve(information, x.T @ (s - mu), assume_a="pos")
        except LinAlgError:
            raise SeparationError(
                f"logistic information matrix became singular after {iteration - 1} iterations "
                "(perfect or quasi-perfect separation)"
            )
        beta = beta + step
        if np.abs(step).max() <= LOGIT_TOLERANCE:
            mu = expit(x @ beta)
            return beta, x.T @ (x * (mu * (1.0 - mu))[:, None]), iteration
    raise ConvergenceError(
        f"logistic fit did not converge in {LOGIT_MAX_ITERATIONS} iterations",
        iterations=LOGIT_MAX_ITERATIONS,
    )


def _marginal_effects(
    x: np.ndarray, beta: np.ndarray, labels: List[str]
) -> Tuple[np.ndarray, np.ndarray]:
    """AME per column and the Jacobian of the AMEs with respect to beta."""
    p = x.shape[1]
    mu = expit(x @ beta)
    density = mu * (1.0 - mu)
    effects = np.empty(p)
    gradients = np.zeros((p, p))
    for k, label in enumerate(labels):
        column = x[:, k]
        if label == INTERCEPT:
            effects[k] = beta[k]
            gradients[k, k] = 1.0
        elif np.all(np.isin(column, (0.0, 1.0))):
            high, low = x.copy(), x.copy()
            high[:, k], low[:, k] = 1.0, 0.0
            mu_high, mu_low = expit(high @ beta), expit(low @ beta)
            effects[k] = float(np.mean(mu_high - mu_low))
            gradients[k] = (
                (mu_high * (1 - mu_high)) @ high - (mu_low * (1 - mu_low)) @ low
            ) / x.shape[0]
        else:
            effects[k] = float(density.mean() * beta[k])
            gradients[k] = (density * (1.0 - 2.0 * mu)) @ x / x.shape[0] * beta[k]
            gradients[k, k] += density.mean()
    return effects, gradients


def _report(
    design: DesignMatrix,
    coefficients: np.ndarray,
    covariance: np.ndarray,
    method: str,
    condition: float,
    specification: str,
    details: Dict,
) -> EstimateReport:
    labels = design.labels
    std_errors = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    return EstimateReport(
        coefficients=dict(zip(labels, map(float, coefficients))),
        std_errors=dict(zip(labels, map(float, std_errors))),
        peer_columns=list(design.peer_columns),
        latent_columns=design.latent_labels,
        method=method,
        n_obs=design.n,
        condition_number=float(condition),
        specification=specification,
        details=details,
    )
