"""Measurement-error covariance of the spectral embedding and the Omega matrix.

Convention: Delta_i estimates Cov(U_hat_i - U_i R), i.e. Sigma(X_i) / n. With
M = U_hat^T U_hat (= n Delta_F) the plug-in estimate reduces to

    Delta_i = M^{-1} (sum_j g_ij (1 - g_ij) U_hat_j U_hat_j^T) M^{-1},

where g_ij = clip(U_hat_i . U_hat_j, 0, 1) and j runs over all nodes.
"""

import numpy as np
from scipy.linalg import inv

from ..errors import CollinearEmbeddingError
from ..models import Embedding, NodeCovariances, OmegaMatrix
from ..utils import CONDITION_LIMIT, condition_number, symmetrize
from .clustering import seeded_kmeans


def node_covariances(values: np.ndarray, variant: str = "rdpg-plugin") -> NodeCovariances:
    """Plug-in covariance for every row of a position matrix.

    With estimated positions this is the RDPG plug-in estimator; with the
    true U it gives the oracle Sigma(X_i) / n.
    """
    n, d = values.shape
    second_moment = values.T @ values
    inverse = _checked_inverse(second_moment, "U_hat^T U_hat")

    products = np.clip(values @ values.T, 0.0, 1.0)
    variances = products * (1.0 - products)
    outer = (values[:, :, None] * values[:, None, :]).reshape(n, d * d)
    middle = (variances @ outer).reshape(n, d, d)

    per_node = np.einsum("ab,nbc,cd->nad", inverse, middle, inverse)
    per_node = (per_node + per_node.transpose(0, 2, 1)) / 2.0
    return NodeCovariances(per_node=per_node, variant=variant)


def delta_rdpg(emb: Embedding) -> NodeCovariances:
    """RDPG plug-in node covariances of an embedding."""
    return node_covariances(emb.uhat)


def delta_sbm(emb: Embedding, k: int, seed: int = 0) -> NodeCovariances:
    """Cluster-level covariances: every node in cluster q gets Sigma(B_q) / n.

    Rows of U_hat are clustered by seeded k-means; the centers play the role
    of B and the cluster proportions the role of pi in the SBM formula.

    Args:
        emb: Embedding to cluster
        k: Number of clusters
        seed: Seed of the k-means restarts

    Returns:
        NodeCovariances with cluster assignments
    """
    labels, centers = seeded_kmeans(emb.uhat, k, seed)
    proportions = np.bincount(labels, minlength=k) / emb.n
    per_cluster = exact_sbm_covariance(centers, proportions)
    return NodeCovariances(
        per_node=per_cluster[labels] / emb.n,
        variant="sbm-cluster",
        cluster_assignments=labels,
    )


def exact_sbm_covariance(centers: np.ndarray, proportions: np.ndarray) -> np.ndarray:
    """Sigma(B_q) for every block of an SBM with positions B and weights pi.

    Sigma(B_q) = Delta_F^{-1} (sum_k pi_k B_k B_k^T (g_qk - g_qk^2)) Delta_F^{-1}
    with Delta_F = sum_k pi_k B_k B_k^T and g_qk = clip(B_q . B_k, 0, 1).

    Returns:
        K x d x d stack (not divided by n)
    """
    centers = np.asarray(centers, dtype=float)
    proportions = np.asarray(proportions, dtype=float)
    outer = centers[:, :, None] * centers[:, None, :]
    second_moment = np.einsum("k,kab->ab", proportions, outer)
    inverse = _checked_inverse(second_moment, "Delta_F")

    products = np.clip(centers @ centers.T, 0.0, 1.0)
    weights = proportions[None, :] * products * (1.0 - products)
    middle = np.einsum("qk,kab->qab", weights, outer)
    sigma = np.einsum("ab,qbc,cd->qad", inverse, middle, inverse)
    return (sigma + sigma.transpose(0, 2, 1)) / 2.0


def assemble_omega(cov: NodeCovariances, q_nonlatent: int) -> OmegaMatrix:
    """Omega with sum_i Delta_i in the leading latent block and zeros elsewhere."""
    d = cov.d
    matrix = np.zeros((d + q_nonlatent, d + q_nonlatent))
    matrix[:d, :d] = symmetrize(cov.total())
    return OmegaMatrix(matrix=matrix, d_latent=d)


def _checked_inverse(matrix: np.ndarray, name: str) -> np.ndarray:
    condition = condition_number(matrix)
    if condition >= CONDITION_LIMIT:
        raise CollinearEmbeddingError(
            f"{name} is singular (condition number {condition:.3g}); "
            "embedding columns are collinear, try a smaller d"
        )
    return inv(matrix)
