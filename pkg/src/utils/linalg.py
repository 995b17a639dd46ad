"""Small numeric helpers shared across modules."""

import numpy as np

CONDITION_LIMIT = 1e12


def mean_offdiagonal(values: np.ndarray) -> float:
    """Mean of the off-diagonal entries of ``values @ values.T`` without forming it."""
    n = values.shape[0]
    if n < 2:
        return 0.0
    total = float(np.sum(values.sum(axis=0) ** 2))
    trace = float(np.sum(values ** 2))
    return (total - trace) / (n * (n - 1))


def symmetrize(matrix: np.ndarray) -> np.ndarray:
    """Average a matrix with its transpose."""
    return (matrix + matrix.T) / 2.0


def condition_number(matrix: np.ndarray) -> float:
    """2-norm condition number; ``inf`` for singular matrices."""
    if matrix.size == 0:
        return 1.0
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[-1] <= 0:
        return float("inf")
    return float(singular[0] / singular[-1])
