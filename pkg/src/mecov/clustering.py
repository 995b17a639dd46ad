"""Seeded k-means with multiple restarts."""

from typing import Tuple

import numpy as np
from sklearn.cluster import KMeans

from ..errors import ConfigError, EmptyClusterError
from ..utils import derive_seed

RESTARTS = 20
MAX_EMPTY_RETRIES = 10


def seeded_kmeans(
    points: np.ndarray, k: int, seed: int, restarts: int = RESTARTS
) -> Tuple[np.ndarray, np.ndarray]:
    """Cluster rows with the best of ``restarts`` single-start k-means runs.

    Restart r of attempt a is seeded with derive_seed(seed, a, r). The run with
    the lowest within-cluster SSE wins; ties go to the lowest restart index.
    Labels are renumbered in order of first appearance.

    Args:
        points: n x d matrix of rows to cluster
        k: Number of clusters, 1 <= k <= n
        seed: Master seed
        restarts: Restarts per attempt

    Returns:
        (labels, centers) with centers ordered like the labels

    Raises:
        EmptyClusterError: If every attempt leaves a cluster empty
    """
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ConfigError(f"need 1 <= K <= n={n}, got K={k}")

    for attempt in range(MAX_EMPTY_RETRIES):
        best = None
        for restart in range(restarts):
            model = KMeans(
                n_clusters=k,
                n_init=1,
                init="k-means++",
                algorithm="lloyd",
                random_state=derive_seed(seed, attempt, restart) % (2 ** 32),
            ).fit(points)
            if best is None or model.inertia_ < best.inertia_:
                best = model
        counts = np.bincount(best.labels_, minlength=k)
        if counts.min() > 0:
            return _relabel(best.labels_, best.cluster_centers_)
    raise EmptyClusterError(f"k-means left an empty cluster in {MAX_EMPTY_RETRIES} attempts (K={k})")


def _relabel(labels: np.ndarray, centers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    _, first = np.unique(labels, return_index=True)
    order = labels[np.sort(first)]
    mapping = np.empty_like(order)
    mapping[order] = np.arange(order.size)
    return mapping[labels], centers[order]
