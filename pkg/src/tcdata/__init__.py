"""TC records: ingestion, networks, role-model exposures and a synthetic unit."""

from .adjacency import build_adjacency
from .exposure import (
    exposure,
    exposure_by_race,
    exposure_components,
    exposure_def1,
    exposure_def2,
    exposure_from_components,
    exited_before,
    observed_matrix,
    observed_outcome,
)
from .ingest import (
    read_events,
    read_exposures,
    read_residents,
    validate_events,
    write_events,
    write_exposures,
    write_residents,
)
from .synthetic import SyntheticUnit, generate_unit, unit_summary

__all__ = [
    "build_adjacency",
    "exposure",
    "exposure_by_race",
    "exposure_components",
    "exposure_def1",
    "exposure_def2",
    "exposure_from_components",
    "exited_before",
    "observed_matrix",
    "observed_outcome",
    "read_events",
    "read_exposures",
    "read_residents",
    "validate_events",
    "write_events",
    "write_exposures",
    "write_residents",
    "SyntheticUnit",
    "generate_unit",
    "unit_summary",
]
