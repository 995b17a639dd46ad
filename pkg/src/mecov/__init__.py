"""Embedding measurement-error covariances and the bias-correction matrix."""

from .clustering import seeded_kmeans
from .covariance import (
    assemble_omega,
    delta_rdpg,
    delta_sbm,
    exact_sbm_covariance,
    node_covariances,
)

__all__ = [
    "seeded_kmeans",
    "assemble_omega",
    "delta_rdpg",
    "delta_sbm",
    "exact_sbm_covariance",
    "node_covariances",
]
