"""Network autoregressive outcome panel."""

from typing import NamedTuple, Optional

import numpy as np

from ..errors import ConfigError
from ..models import Graph, LatentFactors, StudyConfig
from ..utils import make_rng


class PanelOutcomes(NamedTuple):
    """Three outcome waves and the lagged peer average L Y2."""
    y1: np.ndarray
    y2: np.ndarray
    y3: np.ndarray
    lagged_peer: np.ndarray


def row_normalize(graph: Graph) -> np.ndarray:
    """L = D^{-1} A; rows of isolated nodes stay zero."""
    weights = graph.weights
    degrees = weights.sum(axis=1)
    normalized = np.zeros_like(weights)
    connected = degrees > 0
    normalized[connected] = weights[connected] / degrees[connected, None]
    return normalized


def simulate_panel(
    factors: LatentFactors,
    graph: Graph,
    cfg: StudyConfig,
    seed: int,
    beta_prev_multiplier: Optional[float] = None,
) -> PanelOutcomes:
    """Simulate Y1 = V1, Y2 = U(m beta) + alpha Y1 + V2, Y3 = alpha Y2 + U beta + rho L Y2 + V3.

    Args:
        factors: True latent positions U
        graph: Network defining L
        cfg: Study parameters (alpha, rho, beta, noise_sd, m)
        seed: Seed of the innovations
        beta_prev_multiplier: Overrides ``cfg.beta_prev_multiplier`` (study D sweeps it)

    Returns:
        PanelOutcomes
    """
    beta = np.asarray(cfg.beta, dtype=float)
    if beta.size != factors.d:
        raise ConfigError(f"beta has {beta.size} entries but the latent dimension is {factors.d}")
    if graph.n != factors.n:
        raise ConfigError("graph and latent factors disagree on n")
    multiplier = cfg.beta_prev_multiplier if beta_prev_multiplier is None else beta_prev_multiplier

    rng = make_rng(seed)
    noise = rng.normal(0.0, cfg.noise_sd, size=(3, factors.n))
    latent = factors.values @ beta

    y1 = noise[0]
    y2 = multiplier * latent + cfg.alpha * y1 + noise[1]
    lagged_peer = row_normalize(graph) @ y2
    y3 = cfg.alpha * y2 + latent + cfg.rho * lagged_peer + noise[2]
    return PanelOutcomes(y1=y1, y2=y2, y3=y3, lagged_peer=lagged_peer)
