"""Data models for RoleModel."""

from .graph import (
    AucCurve,
    Embedding,
    Graph,
    LatentFactors,
    NodeCovariances,
    OmegaMatrix,
)
from .panel import Event, EventLog, ExposureVector, Resident, ResidentPanel
from .config import EstimateConfig, InterventionConfig, LatentConfig, RunConfig, StudyConfig
from .result import BiasRow, BiasTable, CascadeReport, CascadeTrace, EstimateReport

__all__ = [
    "AucCurve",
    "Embedding",
    "Graph",
    "LatentFactors",
    "NodeCovariances",
    "OmegaMatrix",
    "Event",
    "EventLog",
    "ExposureVector",
    "Resident",
    "ResidentPanel",
    "EstimateConfig",
    "InterventionConfig",
    "LatentConfig",
    "RunConfig",
    "StudyConfig",
    "BiasRow",
    "BiasTable",
    "CascadeReport",
    "CascadeTrace",
    "EstimateReport",
]
