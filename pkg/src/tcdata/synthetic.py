"""Synthetic TC unit with a planted role-model effect.

Entry days are uniform over a three-year window and stays are a clipped
normal with median 150 days (maximum 180). Latent positions drive both the
affirmation rate between contemporaries and graduation, so the unit carries
latent homophily. Graduation follows a linear probability model with the
definition-1 exposure, simulated in exit order so each resident only sees
peers who already left.
"""

from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import ConfigError
from ..models import Event, EventLog, Resident, ResidentPanel
from ..models.panel import MAX_STAY_DAYS
from ..utils import SeedGenerator

WINDOW_DAYS = 1095
STAY_MEDIAN = 150.0
STAY_SD = 25.0
MIN_STAY = 14
EVENTS_PER_RESIDENT = 22.0
DEFAULT_EPOCH = "2015-01-01"

# Coefficients keep every graduation probability inside [0.12, 0.93].
INTERCEPT = 0.26
LATENT_EFFECT = 0.08
AGE_EFFECT = 0.0015
WHITE_EFFECT = 0.03
LSI_EFFECT = -0.0015


class SyntheticUnit(BaseModel):
    """A generated unit and the truth behind it."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    panel: ResidentPanel = Field(..., description="Residents")
    log: EventLog = Field(..., description="Affirmation events")
    positions: np.ndarray = Field(..., description="n x 2 latent positions")
    rho: float = Field(..., description="Planted role-model effect")
    probabilities: np.ndarray = Field(..., description="Graduation probability of each resident")


def generate_unit(
    n: int = 400,
    rho: float = 0.5,
    seed: int = 0,
    events_per_resident: float = EVENTS_PER_RESIDENT,
    epoch: str = DEFAULT_EPOCH,
) -> SyntheticUnit:
    """Generate residents, affirmations and graduation outcomes.

    Args:
        n: Number of residents
        rho: Planted effect of the exposure on graduation probability, in [0, 0.5]
        seed: Master seed
        events_per_resident: Expected affirmations per resident
        epoch: Calendar date of day 0 recorded in the panel

    Returns:
        SyntheticUnit with panel, event log and the generating quantities
    """
    if not 0.0 <= rho <= 0.5:
        raise ConfigError("rho must lie in [0, 0.5] to keep probabilities valid")
    seeds = SeedGenerator(seed)

    rng = seeds.rng(0)
    entry = rng.integers(0, WINDOW_DAYS, size=n)
    stay = np.clip(np.rint(rng.normal(STAY_MEDIAN, STAY_SD, size=n)), MIN_STAY, MAX_STAY_DAYS)
    exit_day = entry + stay.astype(int)
    age = rng.integers(19, 60, size=n).astype(float)
    white = (rng.random(n) < 0.6).astype(int)
    lsi = rng.integers(10, 51, size=n).astype(float)
    positions = seeds.rng(1).dirichlet(np.ones(3), size=n)[:, :2]

    log, weights = _affirmations(entry, exit_day, positions, events_per_resident * n, seeds.rng(2))

    base = (
        INTERCEPT
        + LATENT_EFFECT * (positions[:, 0] - positions[:, 1])
        + AGE_EFFECT * (age - 39.0)
        + WHITE_EFFECT * white
        + LSI_EFFECT * (lsi - 30.0)
    )
    graduated, probabilities = _outcomes_in_exit_order(
        base, rho, weights, exit_day, seeds.rng(3)
    )

    width = len(str(n))
    ids = [f"R{k:0{width}d}" for k in range(n)]
    residents = [
        Resident(id=ids[k], entry_day=int(entry[k]), exit_day=int(exit_day[k]),
                 graduated=int(graduated[k]), age=float(age[k]), white=int(white[k]),
                 lsi=float(lsi[k]))
        for k in range(n)
    ]
    events = [Event(sender=ids[s], receiver=ids[r], day=int(day)) for s, r, day in log]
    return SyntheticUnit(
        panel=ResidentPanel(residents=residents, epoch=epoch),
        log=EventLog(events=events, kind="affirmations"),
        positions=positions,
        rho=rho,
        probabilities=probabilities,
    )


def _affirmations(
    entry: np.ndarray,
    exit_day: np.ndarray,
    positions: np.ndarray,
    expected_total: float,
    rng: np.random.Generator,
):
    """Poisson event counts proportional to overlap days times X_i . X_j."""
    n = entry.size
    rows, cols = np.triu_indices(n, k=1)
    start = np.maximum(entry[rows], entry[cols])
    stop = np.minimum(exit_day[rows], exit_day[cols])
    overlap = np.clip(stop - start, 0, None).astype(float)
    affinity = np.sum(positions[rows] * positions[cols], axis=1)
    intensity = overlap * affinity
    if intensity.sum() > 0:
        intensity *= expected_total / intensity.sum()

    counts = rng.poisson(intensity)
    pair = np.repeat(np.arange(rows.size), counts)
    days = start[pair] + np.floor(rng.random(pair.size) * overlap[pair]).astype(int)
    forward = rng.random(pair.size) < 0.5
    senders = np.where(forward, rows[pair], cols[pair])
    receivers = np.where(forward, cols[pair], rows[pair])

    order = np.lexsort((receivers, senders, days))
    log: List = list(zip(senders[order], receivers[order], days[order]))

    weights = np.zeros((n, n))
    weights[rows, cols] = counts
    weights = weights + weights.T
    return log, weights


def _outcomes_in_exit_order(
    base: np.ndarray,
    rho: float,
    weights: np.ndarray,
    exit_day: np.ndarray,
    rng: np.random.Generator,
):
    n = base.size
    graduated = np.zeros(n, dtype=int)
    probabilities = np.zeros(n)
    draws = rng.random(n)
    for day in np.unique(exit_day):
        leaving = np.flatnonzero(exit_day == day)
        earlier = exit_day < day
        for i in leaving:
            total = weights[i].sum()
            observed = weights[i, earlier] @ graduated[earlier] if total > 0 else 0.0
            share = observed / total if total > 0 else 0.0
            probabilities[i] = base[i] + rho * share
            graduated[i] = int(draws[i] < probabilities[i])
    return graduated, probabilities


def unit_summary(unit: SyntheticUnit) -> Dict[str, float]:
    """Headline volumes of a generated unit."""
    return {
        "residents": unit.panel.n,
        "events": len(unit.log.events),
        "graduation_rate": float(unit.panel.graduated.mean()),
    }
