"""Affirmation / correction networks from event logs."""

from typing import Literal

import numpy as np

from ..errors import ConfigError, DataError
from ..models import EventLog, Graph, ResidentPanel

AdjacencyMode = Literal["sum", "received"]


def build_adjacency(
    log: EventLog,
    panel: ResidentPanel,
    binarize: bool = False,
    mode: AdjacencyMode = "sum",
) -> Graph:
    """Count events between residents.

    In ``sum`` mode A_ij counts events in either direction, giving a symmetric
    graph. In ``received`` mode row i holds what i received (A_ij counts
    j -> i), giving a directed graph whose rows drive the exposures.

    Args:
        log: Events between residents of the panel
        panel: Residents in matrix order
        binarize: Map every positive count to 1
        mode: ``sum`` or ``received``

    Returns:
        Graph over the panel's residents

    Raises:
        DataError: If an event references an unknown resident
    """
    index = panel.index()
    counts = np.zeros((panel.n, panel.n))
    for position, event in enumerate(log.events):
        try:
            sender, receiver = index[event.sender], index[event.receiver]
        except KeyError as e:
            row = event.row if event.row is not None else position + 2
            raise DataError(f"event references unknown resident id {e.args[0]}", row=row)
        if sender == receiver:
            continue
        counts[receiver, sender] += 1.0

    if mode == "sum":
        weights, directed = counts + counts.T, False
    elif mode == "received":
        weights, directed = counts, True
    else:
        raise ConfigError(f"unknown adjacency mode {mode}")

    if binarize:
        weights = (weights > 0).astype(float)
    return Graph(weights=weights, directed=directed)
