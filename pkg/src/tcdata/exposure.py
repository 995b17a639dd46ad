"""Role-model peer exposures.

Resident j's outcome is observed by i only if j exited strictly before i:
Y_j^(i) = S_j when exit_j < exit_i, else 0. Definition 1 averages Y_j^(i)
over all neighbours; definition 2 averages S_j over neighbours that exited
before i. Row i of the graph supplies the weights of resident i.
"""

from typing import Optional, Tuple

import numpy as np

from ..errors import ConfigError
from ..models import ExposureVector, Graph, Resident, ResidentPanel

DEFINITIONS = ("def1", "def2")


def observed_outcome(i: Resident, j: Resident) -> int:
    """Y_j^(i): S_j if j left strictly before i, else 0."""
    return j.graduated if j.exit_day < i.exit_day else 0


def exited_before(panel: ResidentPanel) -> np.ndarray:
    """Boolean matrix E with E[i, j] true when j exited strictly before i."""
    exits = panel.exit_days
    return exits[None, :] < exits[:, None]


def observed_matrix(panel: ResidentPanel, outcomes: Optional[np.ndarray] = None) -> np.ndarray:
    """Matrix Y with Y[i, j] = Y_j^(i), optionally using substitute outcomes."""
    outcomes = panel.graduated if outcomes is None else np.asarray(outcomes, dtype=float)
    return exited_before(panel) * outcomes[None, :]


def exposure_components(
    panel: ResidentPanel,
    graph: Graph,
    definition: str = "def1",
    outcomes: Optional[np.ndarray] = None,
    peers: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Numerator sum_j A_ij Y_j^(i) and denominator sum_j A_ij over qualifying peers.

    Args:
        panel: Residents in matrix order
        graph: Graph over the same residents
        definition: ``def1`` (all neighbours) or ``def2`` (neighbours who left first)
        outcomes: Substitute graduation outcomes (defaults to the panel's)
        peers: Boolean mask of residents allowed as peers

    Returns:
        (numerator, denominator) arrays of length n
    """
    if definition not in DEFINITIONS:
        raise ConfigError(f"unknown exposure definition {definition}")
    if graph.n != panel.n:
        raise ConfigError(f"graph has {graph.n} nodes but the panel has {panel.n} residents")

    weights = graph.weights
    if peers is not None:
        weights = weights * np.asarray(peers, dtype=float)[None, :]
    if definition == "def2":
        weights = weights * exited_before(panel)

    numerator = np.sum(weights * observed_matrix(panel, outcomes), axis=1)
    denominator = weights.sum(axis=1)
    return numerator, denominator


def exposure_from_components(
    panel: ResidentPanel,
    numerator: np.ndarray,
    denominator: np.ndarray,
    definition: str,
    binarized: bool = False,
) -> ExposureVector:
    """Ratio of components; missing where the denominator is zero."""
    values = np.full(panel.n, np.nan)
    present = denominator > 0
    values[present] = numerator[present] / denominator[present]
    return ExposureVector.from_array(panel.ids, values, definition, binarized=binarized)


def exposure_def1(
    panel: ResidentPanel,
    graph: Graph,
    outcomes: Optional[np.ndarray] = None,
    binarized: bool = False,
) -> ExposureVector:
    """Weighted mean of Y_j^(i) over all neighbours."""
    numerator, denominator = exposure_components(panel, graph, "def1", outcomes)
    return exposure_from_components(panel, numerator, denominator, "def1", binarized)


def exposure_def2(
    panel: ResidentPanel,
    graph: Graph,
    outcomes: Optional[np.ndarray] = None,
    binarized: bool = False,
) -> ExposureVector:
    """Weighted mean of S_j over neighbours who exited before i."""
    numerator, denominator = exposure_components(panel, graph, "def2", outcomes)
    return exposure_from_components(panel, numerator, denominator, "def2", binarized)


def exposure(
    panel: ResidentPanel,
    graph: Graph,
    definition: str = "def1",
    outcomes: Optional[np.ndarray] = None,
    binarized: bool = False,
) -> ExposureVector:
    """Exposure under either definition."""
    builders = {"def1": exposure_def1, "def2": exposure_def2}
    if definition not in builders:
        raise ConfigError(f"unknown exposure definition {definition}")
    return builders[definition](panel, graph, outcomes=outcomes, binarized=binarized)


def exposure_by_race(
    panel: ResidentPanel,
    graph: Graph,
    definition: str = "def1",
    outcomes: Optional[np.ndarray] = None,
    binarized: bool = False,
) -> Tuple[ExposureVector, ExposureVector]:
    """Exposures restricted to white peers and to non-white peers."""
    white = panel.column("white") == 1
    vectors = []
    for mask, suffix in ((white, "white"), (~white, "nonwhite")):
        numerator, denominator = exposure_components(panel, graph, definition, outcomes, peers=mask)
        vectors.append(exposure_from_components(
            panel, numerator, denominator, f"{definition}-{suffix}", binarized
        ))
    return vectors[0], vectors[1]
