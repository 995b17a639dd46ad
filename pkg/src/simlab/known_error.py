"""Measurement-error desk checks.

``known_error_trial`` observes every latent row with independent Gaussian
error of known covariance. ``single_node_trial`` keeps the true positions for
every node but one and takes that node's row from the spectral embedding of a
sampled graph, with Omega holding only that node's error covariance. In both
the corrected estimator should land closer to the true coefficients than
plain least squares.
"""

from typing import Dict, Optional, Sequence

import numpy as np

from ..embed import ase, procrustes_align
from ..mecov import node_covariances
from ..models import LatentConfig, OmegaMatrix
from ..netgen import build_factors, gen_rdpg
from ..peerlm import build_design, fit_bias_corrected, fit_ols
from ..utils import derive_seed, make_rng
from .studies import DCSBM_DIRECTIONS


def known_error_trial(
    n: int = 400,
    seed: int = 0,
    beta=(1.0, 1.0),
    eta=(0.5, 0.3),
    error_cov: Optional[np.ndarray] = None,
    noise_sd: float = 1.0,
) -> Dict[str, float]:
    """One trial; returns the coefficient error of both estimators.

    The outcome is y = eta_0 + eta_1 z + U beta + e with a covariate z that
    loads on U, so the error in U biases every coefficient.

    Args:
        n: Observations
        seed: Seed of the trial
        beta: Latent coefficients
        eta: Intercept and covariate coefficient
        error_cov: Covariance of each row's measurement error (default 0.25 I)
        noise_sd: Outcome noise

    Returns:
        Dict with ``corrected_error`` and ``uncorrected_error`` (Euclidean norms)
    """
    beta = np.asarray(beta, dtype=float)
    d = beta.size
    error_cov = 0.25 * np.eye(d) if error_cov is None else np.asarray(error_cov, dtype=float)
    rng = make_rng(seed)

    latent = rng.normal(size=(n, d))
    covariate = latent.sum(axis=1) / np.sqrt(d) + rng.normal(size=n)
    y = eta[0] + eta[1] * covariate + latent @ beta + rng.normal(0.0, noise_sd, size=n)
    observed = latent + rng.multivariate_normal(np.zeros(d), error_cov, size=n)

    design = build_design({"z": covariate}, uhat=observed, peer_columns=[], peer_bounds=None)
    omega = np.zeros((design.d + design.q,) * 2)
    omega[:d, :d] = n * error_cov
    truth = np.concatenate([beta, eta])

    corrected = fit_bias_corrected(design, y, OmegaMatrix(matrix=omega, d_latent=d))
    uncorrected = fit_ols(design, y)
    return {
        "corrected_error": float(np.linalg.norm(_vector(corrected.coefficients) - truth)),
        "uncorrected_error": float(np.linalg.norm(_vector(uncorrected.coefficients) - truth)),
    }


def single_node_trial(
    n: int = 400,
    seed: int = 0,
    beta: Sequence[float] = (1.0, 3.0),
    eta: Sequence[float] = (0.5, 0.3),
    density: float = 0.10,
    node: int = 0,
    redraws: int = 20,
    noise_sd: float = 0.0,
) -> Dict[str, float]:
    """One estimated node among known positions; returns both coefficient errors.

    Positions come from the two-block DCSBM of study A. The outcome is
    y = eta_0 + eta_1 z + U beta + e with a covariate z loading on U. For each
    of ``redraws`` sampled graphs the embedding is Procrustes-aligned to U and
    row ``node`` of the design is replaced by U_i + sqrt(n) (U_hat_i R - U_i),
    an error whose covariance is Sigma(U_i). Omega holds Sigma(U_i), computed
    from the true positions, in its latent block and nothing else. Both
    estimators are averaged over the redraws before they are compared with
    the truth.

    Args:
        n: Node count
        seed: Seed of the trial
        beta: Latent coefficients (length 2)
        eta: Intercept and covariate coefficient
        density: Expected edge density of the sampled graphs
        node: Index of the estimated node
        redraws: Graphs sampled per trial
        noise_sd: Outcome noise

    Returns:
        Dict with ``corrected_error`` and ``uncorrected_error`` (Euclidean norms)
    """
    beta = np.asarray(beta, dtype=float)
    factors = build_factors(LatentConfig(
        n=n, d=beta.size, kind="dcsbm",
        cluster_directions=DCSBM_DIRECTIONS, cluster_probs=[0.5, 0.5],
        target_density=density, seed=derive_seed(seed, 0),
    ))
    latent = factors.values
    d = factors.d
    rng = make_rng(derive_seed(seed, 1))
    covariate = latent.sum(axis=1) + rng.normal(size=n)
    y = eta[0] + eta[1] * covariate + latent @ beta + rng.normal(0.0, noise_sd, size=n)

    sigma = n * node_covariances(latent).per_node[node]
    omega = np.zeros((d + 2, d + 2))
    omega[:d, :d] = sigma
    omega = OmegaMatrix(matrix=omega, d_latent=d)
    truth = np.concatenate([beta, eta])

    corrected = np.zeros_like(truth)
    uncorrected = np.zeros_like(truth)
    for draw in range(redraws):
        graph = gen_rdpg(factors, seed=derive_seed(seed, 2, draw))
        aligned = procrustes_align(ase(graph, d).uhat, latent)
        observed = latent.copy()
        observed[node] += np.sqrt(n) * (aligned[node] - latent[node])

        design = build_design({"z": covariate}, uhat=observed, peer_columns=[], peer_bounds=None)
        corrected += _vector(fit_bias_corrected(design, y, omega).coefficients)
        uncorrected += _vector(fit_ols(design, y).coefficients)

    return {
        "corrected_error": float(np.linalg.norm(corrected / redraws - truth)),
        "uncorrected_error": float(np.linalg.norm(uncorrected / redraws - truth)),
    }


def _vector(coefficients: Dict[str, float]) -> np.ndarray:
    return np.array(list(coefficients.values()))
