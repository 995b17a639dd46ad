"""Utility functions for RoleModel."""

from .seed_generator import SeedGenerator, derive_seed, make_rng, splitmix64
from .linalg import CONDITION_LIMIT, condition_number, mean_offdiagonal, symmetrize

__all__ = [
    "SeedGenerator",
    "derive_seed",
    "make_rng",
    "splitmix64",
    "CONDITION_LIMIT",
    "condition_number",
    "mean_offdiagonal",
    "symmetrize",
]
