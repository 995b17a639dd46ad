"""Graduation threshold chosen by misclassification error."""

from typing import Tuple

import numpy as np

from ..errors import ConfigError


def threshold_grid(step: float = 0.001) -> np.ndarray:
    """Evenly spaced thresholds covering [0, 1]."""
    if not 0 < step <= 0.5:
        raise ConfigError(f"threshold grid step must lie in (0, 0.5], got {step}")
    return np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)


def misclassification_curve(
    fitted: np.ndarray, s_true: np.ndarray, step: float = 0.001
) -> Tuple[np.ndarray, np.ndarray]:
    """Error rate mean(1{fitted >= t} != s) at every grid threshold t."""
    fitted = np.asarray(fitted, dtype=float)
    s_true = np.asarray(s_true, dtype=int)
    if fitted.shape != s_true.shape:
        raise ConfigError("fitted values and outcomes must have the same length")
    if fitted.size == 0:
        raise ConfigError("cannot choose a threshold without observations")
    grid = threshold_grid(step)
    predicted = fitted[None, :] >= grid[:, None]
    errors = np.mean(predicted != (s_true[None, :] == 1), axis=1)
    return grid, errors


def choose_threshold(fitted: np.ndarray, s_true: np.ndarray, step: float = 0.001) -> float:
    """Smallest grid threshold with the minimum misclassification error."""
    grid, errors = misclassification_curve(fitted, s_true, step)
    return float(grid[int(np.argmin(errors))])
