"""Counterfactual buddy interventions."""

from .cascade import (
    apply_buddy,
    buddy_exposure,
    default_buddy_weight,
    run_cascade,
    select_targets,
)
from .threshold import choose_threshold, misclassification_curve, threshold_grid

__all__ = [
    "apply_buddy",
    "buddy_exposure",
    "default_buddy_weight",
    "run_cascade",
    "select_targets",
    "choose_threshold",
    "misclassification_curve",
    "threshold_grid",
]
