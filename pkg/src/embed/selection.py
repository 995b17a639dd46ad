"""Embedding dimension selection by held-out link-prediction AUC."""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from sklearn.metrics import roc_auc_score

from ..errors import ConfigError, DegenerateFoldError
from ..models import AucCurve, Graph
from ..utils import derive_seed, make_rng
from .ase import adjacency_matrix, spectral_positions

MAX_FOLD_RETRIES = 10


def select_dim_auc(
    graph: Union[Graph, np.ndarray],
    d_candidates: Sequence[int],
    holdout_frac: float = 0.1,
    folds: int = 5,
    seed: int = 0,
    tolerance: float = 0.005,
) -> AucCurve:
    """Mean held-out AUC per candidate dimension and the plateau choice.

    Each fold hides ``holdout_frac`` of the observed edges together with as
    many sampled non-edge pairs, zeroes them in the adjacency, embeds the
    masked graph once at the largest candidate and scores every hidden pair by
    U_hat_i . U_hat_j for each truncation. The chosen dimension is the smallest
    candidate whose mean AUC is within ``tolerance`` of the best.

    Args:
        graph: Graph or raw symmetric weight matrix
        d_candidates: Candidate dimensions
        holdout_frac: Fraction of observed edges hidden per fold, in (0, 0.5]
        folds: Number of folds
        seed: Master seed; fold f attempt a uses derive_seed(seed, f, a)
        tolerance: Plateau tolerance

    Returns:
        AucCurve over the sorted candidates

    Raises:
        DegenerateFoldError: If a fold cannot produce both labels after retries
    """
    if not 0 < holdout_frac <= 0.5:
        raise ConfigError(f"holdout_frac must lie in (0, 0.5], got {holdout_frac}")
    dims = sorted(set(int(d) for d in d_candidates))
    if not dims:
        raise ConfigError("d_candidates must be nonempty")
    matrix = adjacency_matrix(graph).copy()
    np.fill_diagonal(matrix, 0.0)
    n = matrix.shape[0]
    if dims[0] < 1 or dims[-1] > n:
        raise ConfigError(f"candidate dimensions must lie in [1, {n}]")
    if folds < 1:
        raise ConfigError("folds must be at least 1")

    scores = np.zeros((folds, len(dims)))
    for fold in range(folds):
        pairs, labels = _holdout_pairs(matrix, holdout_frac, seed, fold)
        masked = matrix.copy()
        masked[pairs[:, 0], pairs[:, 1]] = 0.0
        masked[pairs[:, 1], pairs[:, 0]] = 0.0

        positions = spectral_positions(masked, dims[-1])
        products = positions[pairs[:, 0]] * positions[pairs[:, 1]]
        cumulative = np.cumsum(products, axis=1)
        for k, d in enumerate(dims):
            scores[fold, k] = roc_auc_score(labels, cumulative[:, d - 1])

    auc = scores.mean(axis=0)
    chosen = next(d for d, value in zip(dims, auc) if value >= auc.max() - tolerance)
    return AucCurve(
        dims=dims,
        auc=[float(np.clip(value, 0.0, 1.0)) for value in auc],
        chosen_d=chosen,
        tolerance=tolerance,
    )


def _holdout_pairs(
    matrix: np.ndarray, holdout_frac: float, seed: int, fold: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Stratified hidden pairs (i < j) with binary labels for one fold."""
    n = matrix.shape[0]
    rows, cols = np.triu_indices(n, k=1)
    observed = matrix[rows, cols] > 0
    edges = np.flatnonzero(observed)
    non_edges = np.flatnonzero(~observed)
    per_class = min(max(1, int(holdout_frac * edges.size)), edges.size, non_edges.size)

    for attempt in range(MAX_FOLD_RETRIES):
        if per_class == 0:
            continue
        rng = make_rng(derive_seed(seed, fold, attempt))
        chosen = np.concatenate([
            rng.choice(edges, size=per_class, replace=False),
            rng.choice(non_edges, size=per_class, replace=False),
        ])
        labels = observed[chosen].astype(int)
        if labels.min() != labels.max():
            return np.column_stack([rows[chosen], cols[chosen]]), labels
    raise DegenerateFoldError(
        f"fold {fold} has no usable held-out pairs after {MAX_FOLD_RETRIES} attempts "
        f"({edges.size} edges, {non_edges.size} non-edges)"
    )
