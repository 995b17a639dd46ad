"""Monte Carlo study presets."""

from abc import ABC, abstractmethod
from typing import Dict, List, Optional

import numpy as np

from ..errors import ConfigError
from ..models import LatentConfig, StudyConfig

DCSBM_DIRECTIONS = [[0.5, 0.1], [0.1, 0.5]]
SBM_DIRECTIONS = [[0.7, 0.2], [0.1, 0.6], [0.2, 0.2], [0.5, 0.5]]
SIZE_SWEEP = [100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0]
DENSITY_SWEEP = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40]
MULTIPLIER_SWEEP = [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0]


class Study(ABC):
    """One simulation design: how a sweep value becomes a latent configuration."""

    sweep_label: str = "n"

    @property
    @abstractmethod
    def name(self) -> str:
        """Study letter."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """What the study varies."""
        pass

    @abstractmethod
    def defaults(self) -> Dict:
        """StudyConfig fields specific to this study."""
        pass

    @abstractmethod
    def latent_config(self, cfg: StudyConfig, sweep_value: float, seed: int) -> LatentConfig:
        """Latent configuration of one replicate."""
        pass

    def multiplier(self, cfg: StudyConfig, sweep_value: float) -> float:
        """m applied to beta in the Y2 equation."""
        return cfg.beta_prev_multiplier

    def config(self, **overrides) -> StudyConfig:
        """StudyConfig with this study's defaults; ``None`` overrides are ignored."""
        fields = {"study": self.name, **self.defaults()}
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return StudyConfig(**fields)


def _as_size(value: float) -> int:
    size = int(round(value))
    if size != value or size < 2:
        raise ConfigError(f"node count sweep values must be integers >= 2, got {value}")
    return size


class DcsbmSizeStudy(Study):
    """Degree-corrected SBM with growing n at fixed density."""

    @property
    def name(self) -> str:
        return "A"

    @property
    def description(self) -> str:
        return "DCSBM, K=2, density fixed, n swept"

    def defaults(self) -> Dict:
        return {"sweep": SIZE_SWEEP, "beta": [1.0, 3.0], "density": 0.20, "covariance": "rdpg"}

    def latent_config(self, cfg: StudyConfig, sweep_value: float, seed: int) -> LatentConfig:
        return _dcsbm(_as_size(sweep_value), cfg.density, seed)


class DcsbmDensityStudy(Study):
    """Degree-corrected SBM at fixed n with density swept."""

    sweep_label = "density"

    @property
    def name(self) -> str:
        return "B"

    @property
    def description(self) -> str:
        return "DCSBM, K=2, n fixed, density swept"

    def defaults(self) -> Dict:
        return {"sweep": DENSITY_SWEEP, "beta": [1.0, 3.0], "n": 200, "covariance": "rdpg"}

    def latent_config(self, cfg: StudyConfig, sweep_value: float, seed: int) -> LatentConfig:
        if not 0 < sweep_value <= 1:
            raise ConfigError(f"density sweep values must lie in (0, 1], got {sweep_value}")
        return _dcsbm(cfg.n, float(sweep_value), seed)


class SbmSizeStudy(Study):
    """Four-block SBM in two dimensions with growing n."""

    @property
    def name(self) -> str:
        return "C"

    @property
    def description(self) -> str:
        return "SBM, K=4, d=2, n swept"

    def defaults(self) -> Dict:
        return {"sweep": SIZE_SWEEP, "beta": [1.0, 2.0], "covariance": "sbm", "k_clusters": 4}

    def latent_config(self, cfg: StudyConfig, sweep_value: float, seed: int) -> LatentConfig:
        return LatentConfig(
            n=_as_size(sweep_value), d=2, kind="sbm",
            cluster_directions=SBM_DIRECTIONS, cluster_probs=[0.25] * 4, seed=seed,
        )


class SignedBiasStudy(Study):
    """Two-block SBM with the lagged latent coefficient scaled by m."""

    sweep_label = "m"

    @property
    def name(self) -> str:
        return "D"

    @property
    def description(self) -> str:
        return "SBM, K=2, n and density fixed, m swept"

    def defaults(self) -> Dict:
        return {"sweep": MULTIPLIER_SWEEP, "beta": [1.0, 3.0], "n": 200, "density": 0.20,
                "covariance": "sbm", "k_clusters": 2}

    def latent_config(self, cfg: StudyConfig, sweep_value: float, seed: int) -> LatentConfig:
        return LatentConfig(
            n=cfg.n, d=2, kind="sbm",
            cluster_directions=DCSBM_DIRECTIONS, cluster_probs=[0.5, 0.5],
            target_density=cfg.density, seed=seed,
        )

    def multiplier(self, cfg: StudyConfig, sweep_value: float) -> float:
        return float(sweep_value)


def _dcsbm(n: int, density: float, seed: int) -> LatentConfig:
    return LatentConfig(
        n=n, d=2, kind="dcsbm",
        cluster_directions=DCSBM_DIRECTIONS, cluster_probs=[0.5, 0.5],
        degree_dist=(0.0, 0.5), target_density=density, seed=seed,
    )


STUDIES: Dict[str, Study] = {
    study.name: study
    for study in (DcsbmSizeStudy(), DcsbmDensityStudy(), SbmSizeStudy(), SignedBiasStudy())
}


def get_study(name: str) -> Study:
    """Look up a study by letter."""
    try:
        return STUDIES[name]
    except KeyError:
        raise ConfigError(f"unknown study {name}; choose one of {', '.join(STUDIES)}")


def study_config(name: str, **overrides) -> StudyConfig:
    """Preset configuration of a study with optional overrides."""
    return get_study(name).config(**overrides)


def sweep_range(start: float, stop: float, step: float) -> List[float]:
    """Inclusive grid, rounded to suppress floating drift."""
    count = int(round((stop - start) / step)) + 1
    return [round(float(v), 10) for v in np.linspace(start, stop, count)]
