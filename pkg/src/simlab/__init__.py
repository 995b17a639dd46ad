"""Monte Carlo simulation studies."""

from .known_error import known_error_trial, single_node_trial
from .panel import PanelOutcomes, row_normalize, simulate_panel
from .runner import METHODS, run_replicate, run_study, study_methods, summarize
from .studies import STUDIES, Study, get_study, study_config, sweep_range

__all__ = [
    "known_error_trial",
    "single_node_trial",
    "PanelOutcomes",
    "row_normalize",
    "simulate_panel",
    "METHODS",
    "run_replicate",
    "run_study",
    "study_methods",
    "summarize",
    "STUDIES",
    "Study",
    "get_study",
    "study_config",
    "sweep_range",
]
