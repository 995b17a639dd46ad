"""Adjacency spectral embedding and dimension selection."""

from .ase import adjacency_matrix, ase, procrustes_align, spectral_positions, top_spectrum
from .selection import select_dim_auc

__all__ = [
    "adjacency_matrix",
    "ase",
    "procrustes_align",
    "spectral_positions",
    "top_spectrum",
    "select_dim_auc",
]
