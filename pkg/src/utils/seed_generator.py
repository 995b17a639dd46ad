"""Deterministic sub-seed derivation for Monte Carlo work."""

from typing import Optional

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """Apply the splitmix64 finaliser to a 64-bit state."""
    z = (state + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, *path: int) -> int:
    """Derive a 64-bit sub-seed from a master seed and an integer path.

    The same (master, path) always yields the same seed, and distinct paths
    give unrelated streams, e.g. ``derive_seed(seed, sweep_index, replicate)``.
    """
    state = splitmix64(int(master) & MASK64)
    for step in path:
        state = splitmix64((state ^ ((int(step) + 1) * GOLDEN_GAMMA)) & MASK64)
    return state


class SeedGenerator:
    """Hands out reproducible sub-seeds and generators from one master seed."""

    def __init__(self, master: int):
        """Initialize with the master seed.

        Args:
            master: Master seed (any integer, reduced to 64 bits)
        """
        self.master = int(master) & MASK64

    def seed(self, *path: int) -> int:
        """Sub-seed for the given path."""
        return derive_seed(self.master, *path)

    def rng(self, *path: int) -> np.random.Generator:
        """Fresh generator for the given path."""
        return np.random.default_rng(self.seed(*path))

    def child(self, *path: int) -> "SeedGenerator":
        """Generator rooted at a sub-seed."""
        return SeedGenerator(self.seed(*path))


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """Generator from an optional seed (None draws fresh entropy)."""
    return np.random.default_rng(None if seed is None else int(seed) & MASK64)
