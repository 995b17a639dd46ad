"""Outcome model design matrices and estimators."""

from .design import (
    INTERCEPT,
    DesignMatrix,
    build_design,
    race_design,
    simulation_design,
    tc_design,
)
from .estimators import fit_bias_corrected, fit_logistic_ame, fit_ols, predict

__all__ = [
    "INTERCEPT",
    "DesignMatrix",
    "build_design",
    "race_design",
    "simulation_design",
    "tc_design",
    "fit_bias_corrected",
    "fit_logistic_ame",
    "fit_ols",
    "predict",
]
