"""Random dot product graph generators and their SBM / DCSBM special cases."""

from typing import Optional, Tuple

import numpy as np

from ..errors import ConfigError, InvalidLatentConfigError
from ..models import Graph, LatentConfig, LatentFactors
from ..utils import derive_seed, make_rng, mean_offdiagonal

PROBABILITY_TOLERANCE = 1e-9
BISECTION_STEPS = 100


def gen_rdpg(factors: LatentFactors, seed: Optional[int] = None) -> Graph:
    """Sample a binary undirected graph with A_ij ~ Bernoulli(U_i . U_j).

    Only the upper triangle is drawn; the lower triangle mirrors it.

    Args:
        factors: Latent positions defining P = U U^T
        seed: Seed of the edge draws

    Returns:
        Graph with 0/1 weights and a zero diagonal

    Raises:
        InvalidLatentConfigError: If some P_ij falls outside [0, 1] beyond tolerance
    """
    probabilities = factors.probabilities()
    _check_probabilities(probabilities)
    probabilities = np.clip(probabilities, 0.0, 1.0)

    n = factors.n
    rng = make_rng(seed)
    upper = np.triu_indices(n, k=1)
    draws = rng.random(upper[0].size) < probabilities[upper]

    weights = np.zeros((n, n))
    weights[upper] = draws
    weights = weights + weights.T
    return Graph(weights=weights)


def build_factors(cfg: LatentConfig) -> LatentFactors:
    """Build latent positions for any supported generator family."""
    builders = {
        "rdpg-generic": build_rdpg_factors,
        "sbm": build_sbm_factors,
        "dcsbm": build_dcsbm_factors,
    }
    return builders[cfg.kind](cfg)


def sample_network(cfg: LatentConfig) -> Tuple[LatentFactors, Graph]:
    """Latent positions from ``cfg.seed`` and a graph drawn from a derived seed."""
    factors = build_factors(cfg)
    graph = gen_rdpg(factors, seed=derive_seed(cfg.seed, 1))
    return factors, graph


def build_rdpg_factors(cfg: LatentConfig) -> LatentFactors:
    """Generic RDPG positions drawn uniformly from the d-dimensional simplex.

    Each X_i is the first d coordinates of a Dirichlet(1, ..., 1) draw with
    d + 1 components, so ||X_i|| <= 1 and every dot product lies in [0, 1].
    """
    rng = make_rng(cfg.seed)
    positions = rng.dirichlet(np.ones(cfg.d + 1), size=cfg.n)[:, : cfg.d]
    values, scale = _rescale(positions, cfg.target_density)
    return LatentFactors(values=values, scale=scale)


def build_sbm_factors(cfg: LatentConfig) -> LatentFactors:
    """Stochastic block model positions: node i sits at cluster_directions[c_i].

    Args:
        cfg: Configuration with kind ``sbm``

    Returns:
        LatentFactors with memberships; scale 1 unless a target density is set
    """
    if cfg.kind != "sbm":
        raise ConfigError(f"build_sbm_factors needs kind 'sbm', got '{cfg.kind}'")
    directions = _cluster_directions(cfg)

    rng = make_rng(cfg.seed)
    memberships = rng.choice(len(cfg.cluster_probs), size=cfg.n, p=cfg.cluster_probs)
    rows = directions[memberships]
    if np.linalg.norm(directions, axis=1).max() > 1 + PROBABILITY_TOLERANCE:
        raise InvalidLatentConfigError("SBM cluster directions must have norm at most 1")
    _check_probabilities(directions @ directions.T)

    values, scale = _rescale(rows, cfg.target_density)
    return LatentFactors(values=values, scale=scale, memberships=memberships)


def build_dcsbm_factors(cfg: LatentConfig) -> LatentFactors:
    """Degree-corrected SBM positions U = Theta H J, rescaled to the target density.

    Theta holds lognormal degree parameters and H one-hot memberships. With a
    target density, X = Theta H J / max_i ||(Theta H J)_i|| and U = sqrt(theta_n) X
    where theta_n makes the mean off-diagonal of U U^T equal the target. When
    theta_n would exceed 1, the largest degree parameters are winsorised at the
    largest cap for which the target is attainable (``truncate_degrees``).

    Args:
        cfg: Configuration with kind ``dcsbm``

    Returns:
        LatentFactors with memberships, degrees and the cap used (if any)

    Raises:
        ConfigError: If the cluster matrix and probabilities disagree
        InvalidLatentConfigError: If the target density is unattainable
    """
    if cfg.kind != "dcsbm":
        raise ConfigError(f"build_dcsbm_factors needs kind 'dcsbm', got '{cfg.kind}'")
    directions = _cluster_directions(cfg)
    _check_probabilities(directions @ directions.T)

    rng = make_rng(cfg.seed)
    memberships = rng.choice(len(cfg.cluster_probs), size=cfg.n, p=cfg.cluster_probs)
    log_mean, log_sd = cfg.degree_dist
    degrees = rng.lognormal(mean=log_mean, sigma=log_sd, size=cfg.n)
    rows = directions[memberships]

    if cfg.target_density is None:
        values = degrees[:, None] * rows
        if np.linalg.norm(values, axis=1).max() > 1 + PROBABILITY_TOLERANCE:
            raise InvalidLatentConfigError(
                "DCSBM rows exceed unit norm; set target_density to rescale"
            )
        return LatentFactors(values=values, memberships=memberships, degrees=degrees)

    cap = None
    if _dcsbm_scale(degrees, rows, cfg.target_density) > 1 + PROBABILITY_TOLERANCE:
        if not cfg.truncate_degrees:
            raise InvalidLatentConfigError(
                f"target density {cfg.target_density} forces edge probabilities above 1; "
                "enable truncate_degrees or lower the target"
            )
        cap = _degree_cap(degrees, rows, cfg.target_density)
        degrees = np.minimum(degrees, cap)

    positions = _unit_max_norm(degrees[:, None] * rows)
    values, scale = _rescale(positions, cfg.target_density)
    return LatentFactors(
        values=values, scale=scale, memberships=memberships, degrees=degrees, degree_cap=cap
    )


def _cluster_directions(cfg: LatentConfig) -> np.ndarray:
    directions = np.asarray(cfg.cluster_directions, dtype=float)
    if directions.ndim != 2 or directions.shape[0] == 0:
        raise ConfigError(f"{cfg.kind} needs a K x d cluster_directions matrix")
    if directions.shape[0] != len(cfg.cluster_probs):
        raise ConfigError(
            f"cluster_directions has {directions.shape[0]} rows but "
            f"cluster_probs has {len(cfg.cluster_probs)} entries"
        )
    if directions.shape[1] != cfg.d:
        raise ConfigError(f"cluster_directions has {directions.shape[1]} columns, expected d={cfg.d}")
    return directions


def _check_probabilities(probabilities: np.ndarray) -> None:
    if probabilities.size == 0:
        return
    low, high = float(probabilities.min()), float(probabilities.max())
    if low < -PROBABILITY_TOLERANCE or high > 1 + PROBABILITY_TOLERANCE:
        raise InvalidLatentConfigError(
            f"edge probabilities span [{low:.6g}, {high:.6g}], outside [0, 1]"
        )


def _unit_max_norm(values: np.ndarray) -> np.ndarray:
    largest = np.linalg.norm(values, axis=1).max()
    if largest <= 0:
        return values
    return values / largest


def _rescale(positions: np.ndarray, target_density: Optional[float]) -> Tuple[np.ndarray, float]:
    """Multiply P by the factor that hits the target density; returns (U, scale)."""
    if target_density is None:
        return positions, 1.0
    base = mean_offdiagonal(positions)
    if base <= 0:
        raise InvalidLatentConfigError("latent positions imply an empty graph; cannot rescale")
    scale = target_density / base
    largest = float(np.max(np.sum(positions ** 2, axis=1)))
    if scale * largest > 1 + PROBABILITY_TOLERANCE:
        raise InvalidLatentConfigError(
            f"target density {target_density} needs probabilities up to {scale * largest:.6g}"
        )
    return np.sqrt(scale) * positions, scale


def _dcsbm_scale(degrees: np.ndarray, rows: np.ndarray, target_density: float) -> float:
    positions = _unit_max_norm(degrees[:, None] * rows)
    base = mean_offdiagonal(positions)
    if base <= 0:
        return float("inf")
    return target_density / base


def _degree_cap(degrees: np.ndarray, rows: np.ndarray, target_density: float) -> float:
    """Largest winsorisation cap on the degrees keeping the density target feasible."""
    low, high = float(degrees.min()), float(degrees.max())
    if _dcsbm_scale(np.minimum(degrees, low), rows, target_density) > 1 + PROBABILITY_TOLERANCE:
        raise InvalidLatentConfigError(
            f"target density {target_density} is unattainable even with equal degrees"
        )
    for _ in range(BISECTION_STEPS):
        middle = (low + high) / 2.0
        if _dcsbm_scale(np.minimum(degrees, middle), rows, target_density) <= 1.0:
            low = middle
        else:
            high = middle
    return low
