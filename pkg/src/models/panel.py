"""Therapeutic-community records: residents, events and exposures."""

from typing import Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

MAX_STAY_DAYS = 180


class Resident(BaseModel):
    """One resident of a TC unit."""
    id: str = Field(..., min_length=1, description="Opaque resident identifier")
    entry_day: int = Field(..., description="Entry day index relative to the unit epoch")
    exit_day: int = Field(..., description="Exit day index relative to the unit epoch")
    graduated: Literal[0, 1] = Field(..., description="Final graduation status S_i")
    age: float = Field(..., ge=0, description="Age in years at entry")
    white: Literal[0, 1] = Field(..., description="White indicator")
    lsi: float = Field(..., ge=0, description="Level of Service Inventory score")

    @model_validator(mode="after")
    def _check_stay(self):
        if self.exit_day <= self.entry_day:
            raise ValueError("exit_day must be after entry_day")
        if self.exit_day - self.entry_day > MAX_STAY_DAYS:
            raise ValueError(f"stay exceeds {MAX_STAY_DAYS} days")
        return self


class Event(BaseModel):
    """A single affirmation or correction."""
    sender: str = Field(..., description="Sending resident id")
    receiver: str = Field(..., description="Receiving resident id")
    day: int = Field(..., description="Day index of the event")
    row: Optional[int] = Field(None, description="Row number in the source file, if read from one")


class EventLog(BaseModel):
    """Timestamped affirmation or correction records of a unit."""
    events: List[Event] = Field(default_factory=list, description="Events in file order")
    kind: Literal["affirmations", "corrections"] = Field(
        "affirmations", description="Which exchange the log records"
    )


class ResidentPanel(BaseModel):
    """All residents of a unit, in a fixed order used by every matrix."""
    residents: List[Resident] = Field(..., description="Residents in matrix order")
    epoch: Optional[str] = Field(None, description="Calendar date of day index 0, if known")

    @field_validator("residents")
    @classmethod
    def _unique_ids(cls, value: List[Resident]) -> List[Resident]:
        ids = [r.id for r in value]
        if len(set(ids)) != len(ids):
            raise ValueError("resident ids must be unique")
        return value

    @property
    def n(self) -> int:
        return len(self.residents)

    @property
    def ids(self) -> List[str]:
        return [r.id for r in self.residents]

    def index(self) -> Dict[str, int]:
        """Map resident id to matrix position."""
        return {r.id: i for i, r in enumerate(self.residents)}

    def column(self, name: str) -> np.ndarray:
        """One resident attribute as a float array in matrix order."""
        return np.array([getattr(r, name) for r in self.residents], dtype=float)

    @property
    def graduated(self) -> np.ndarray:
        return self.column("graduated")

    @property
    def exit_days(self) -> np.ndarray:
        return self.column("exit_day")


class ExposureVector(BaseModel):
    """Per-resident weighted peer-graduation average; None where no qualifying peer exists."""
    ids: List[str] = Field(..., description="Resident ids in matrix order")
    values: List[Optional[float]] = Field(..., description="Exposure in [0, 1] or None")
    definition: str = Field(..., description="Role-model definition, e.g. def1, def2, def1-white")
    binarized: bool = Field(False, description="Whether the graph was binarized")

    @model_validator(mode="after")
    def _check_values(self):
        if len(self.ids) != len(self.values):
            raise ValueError("ids and values must have the same length")
        for value in self.values:
            if value is not None and not (0.0 <= value <= 1.0):
                raise ValueError(f"exposure {value} outside [0, 1]")
        return self

    @classmethod
    def from_array(cls, ids: List[str], values: np.ndarray, definition: str,
                   binarized: bool = False) -> "ExposureVector":
        """Build from a float array where NaN marks a missing exposure."""
        clean = [None if np.isnan(v) else float(min(max(v, 0.0), 1.0)) for v in values]
        return cls(ids=list(ids), values=clean, definition=definition, binarized=binarized)

    def as_array(self) -> np.ndarray:
        """Float array with NaN for missing values."""
        return np.array([np.nan if v is None else v for v in self.values], dtype=float)

    def present(self) -> np.ndarray:
        """Boolean mask of residents with an exposure."""
        return np.array([v is not None for v in self.values], dtype=bool)
