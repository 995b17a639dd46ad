"""Adjacency spectral embedding."""

from typing import Tuple, Union

import numpy as np
from scipy.linalg import eigh, orthogonal_procrustes

from ..errors import ConfigError, RankDeficiencyError
from ..models import Embedding, Graph

RANK_TOLERANCE = 1e-12


def ase(graph: Union[Graph, np.ndarray], d: int) -> Embedding:
    """Embed a graph as U_hat = Q Sigma^{1/2} from its top-d singular triplets.

    The weighted adjacency is embedded as-is. For a symmetric matrix the
    singular vectors are eigenvectors and the singular values are the absolute
    eigenvalues. Each column's sign is fixed so its largest-magnitude entry is
    positive.

    Args:
        graph: Graph, or a raw symmetric matrix (diagonal kept)
        d: Embedding dimension, 1 <= d <= n

    Returns:
        Embedding with n x d positions and nonincreasing singular values

    Raises:
        ConfigError: If d is out of range
        RankDeficiencyError: If the d-th singular value is below 1e-12
    """
    matrix = adjacency_matrix(graph)
    n = matrix.shape[0]
    if not 1 <= d <= n:
        raise ConfigError(f"embedding dimension must satisfy 1 <= d <= n={n}, got {d}")

    vectors, singular_values = top_spectrum(matrix, d)
    if singular_values[-1] < RANK_TOLERANCE:
        raise RankDeficiencyError(
            f"singular value {d} is {singular_values[-1]:.3g}; "
            f"d={d} exceeds the numerical rank of the graph"
        )
    return Embedding(uhat=vectors * np.sqrt(singular_values), singular_values=singular_values)


def adjacency_matrix(graph: Union[Graph, np.ndarray]) -> np.ndarray:
    """Symmetric matrix to embed (directed graphs are symmetrized)."""
    if isinstance(graph, Graph):
        return graph.symmetrized().weights
    matrix = np.asarray(graph, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ConfigError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ConfigError("matrix contains NaN or infinite entries")
    if not np.allclose(matrix, matrix.T, rtol=0, atol=1e-10 * max(1.0, np.abs(matrix).max())):
        raise ConfigError("matrix to embed must be symmetric")
    return (matrix + matrix.T) / 2.0


def top_spectrum(matrix: np.ndarray, d: int) -> Tuple[np.ndarray, np.ndarray]:
    """Top-d singular vectors and values of a symmetric matrix, sign-normalised.

    Ties in magnitude keep eigh's ascending order. Zero singular values are
    returned as-is; callers decide whether they are acceptable.
    """
    eigenvalues, eigenvectors = eigh(matrix)
    order = np.argsort(-np.abs(eigenvalues), kind="stable")[:d]
    singular_values = np.abs(eigenvalues[order])
    vectors = eigenvectors[:, order]

    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs, singular_values


def spectral_positions(matrix: np.ndarray, d: int) -> np.ndarray:
    """Q Sigma^{1/2} without the rank check; null directions give zero columns."""
    vectors, singular_values = top_spectrum(matrix, d)
    return vectors * np.sqrt(singular_values)


def procrustes_align(uhat: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Rotate ``uhat`` by the orthogonal matrix that best matches ``target``."""
    rotation, _ = orthogonal_procrustes(uhat, target)
    return uhat @ rotation
