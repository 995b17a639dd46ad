"""Design matrices for the outcome models.

Column order is fixed: the latent block (u1..ud) first, then the non-latent
predictors W with the intercept leading. The bias-correction matrix Omega is
laid out in the same order.
"""

from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigError
from ..models import ExposureVector, ResidentPanel

INTERCEPT = "intercept"
TC_COVARIATES = ["age", "white", "lsi"]


class DesignMatrix(BaseModel):
    """Predictors [U_hat | W] with labels."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    w: np.ndarray = Field(..., description="n x q non-latent predictors")
    w_labels: List[str] = Field(..., description="Names of the W columns")
    uhat: Optional[np.ndarray] = Field(None, description="Optional n x d latent block")
    peer_columns: List[str] = Field(default_factory=list, description="Peer-exposure columns of W")
    peer_bounds: Optional[Tuple[float, float]] = Field(
        (0.0, 1.0), description="Range enforced on peer columns (None: unbounded)"
    )

    @model_validator(mode="after")
    def _check_design(self):
        self.w = np.asarray(self.w, dtype=float)
        if self.w.ndim != 2 or self.w.shape[1] != len(self.w_labels):
            raise ValueError("w must be 2-D with one label per column")
        if len(set(self.w_labels)) != len(self.w_labels):
            raise ValueError("column labels must be unique")
        if not np.all(np.isfinite(self.w)):
            raise ValueError("design contains NaN or infinite values")
        if self.uhat is not None:
            self.uhat = np.asarray(self.uhat, dtype=float)
            if self.uhat.ndim != 2 or self.uhat.shape[0] != self.w.shape[0]:
                raise ValueError("uhat must have one row per observation")
            if not np.all(np.isfinite(self.uhat)):
                raise ValueError("uhat contains NaN or infinite values")
        if INTERCEPT in self.w_labels and not np.all(self.column(INTERCEPT) == 1.0):
            raise ValueError("intercept column must be all ones")
        for label in self.peer_columns:
            if label not in self.w_labels:
                raise ValueError(f"peer column {label} not in design")
            if self.peer_bounds is not None:
                low, high = self.peer_bounds
                values = self.column(label)
                if values.size and (values.min() < low or values.max() > high):
                    raise ValueError(f"peer column {label} outside [{low}, {high}]")
        return self

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def q(self) -> int:
        return self.w.shape[1]

    @property
    def d(self) -> int:
        return 0 if self.uhat is None else self.uhat.shape[1]

    @property
    def latent_labels(self) -> List[str]:
        return [f"u{k + 1}" for k in range(self.d)]

    @property
    def labels(self) -> List[str]:
        return self.latent_labels + list(self.w_labels)

    def column(self, label: str) -> np.ndarray:
        return self.w[:, self.w_labels.index(label)]

    def matrix(self) -> np.ndarray:
        """Full predictor matrix, latent block first."""
        if self.uhat is None:
            return self.w
        return np.hstack([self.uhat, self.w])

    def with_latent(self, uhat: Optional[np.ndarray]) -> "DesignMatrix":
        """Same W with a different (or no) latent block."""
        return DesignMatrix(w=self.w, w_labels=self.w_labels, uhat=uhat,
                            peer_columns=self.peer_columns, peer_bounds=self.peer_bounds)

    def with_column(self, label: str, values: np.ndarray) -> "DesignMatrix":
        """Copy with one W column replaced."""
        w = self.w.copy()
        w[:, self.w_labels.index(label)] = values
        return DesignMatrix(w=w, w_labels=self.w_labels, uhat=self.uhat,
                            peer_columns=self.peer_columns, peer_bounds=self.peer_bounds)


def build_design(
    columns: Dict[str, np.ndarray],
    uhat: Optional[np.ndarray] = None,
    peer_columns: Optional[List[str]] = None,
    peer_bounds: Optional[Tuple[float, float]] = (0.0, 1.0),
) -> DesignMatrix:
    """Design with an intercept followed by ``columns`` in insertion order."""
    lengths = {len(values) for values in columns.values()}
    if len(lengths) > 1:
        raise ConfigError("all design columns must have the same length")
    n = lengths.pop() if lengths else (0 if uhat is None else len(uhat))
    labels = [INTERCEPT] + list(columns)
    w = np.column_stack([np.ones(n)] + [np.asarray(v, dtype=float) for v in columns.values()])
    return DesignMatrix(
        w=w, w_labels=labels, uhat=uhat, peer_columns=peer_columns or [], peer_bounds=peer_bounds
    )


def simulation_design(
    y_prev: np.ndarray, lagged_peer: np.ndarray, uhat: Optional[np.ndarray] = None
) -> DesignMatrix:
    """W = [1, Y_{t-1}, L Y_{t-1}] of the network autoregressive model."""
    return build_design(
        {"y_lag": y_prev, "peer_lag": lagged_peer},
        uhat=uhat,
        peer_columns=["peer_lag"],
        peer_bounds=None,
    )


def tc_design(
    panel: ResidentPanel, exposure: ExposureVector, uhat: Optional[np.ndarray] = None
) -> Tuple[DesignMatrix, np.ndarray]:
    """Graduation model W = [1, peer_grad, age, white, lsi] on residents with an exposure.

    Args:
        panel: Residents in matrix order
        exposure: Peer exposure aligned with the panel
        uhat: Full-unit embedding (rows are subset to the kept residents)

    Returns:
        (design, row mask into the panel)
    """
    _check_alignment(panel, exposure)
    mask = exposure.present()
    columns = {"peer_grad": exposure.as_array()[mask]}
    for name in TC_COVARIATES:
        columns[name] = panel.column(name)[mask]
    design = build_design(columns, uhat=_rows(uhat, mask), peer_columns=["peer_grad"])
    return design, mask


def race_design(
    panel: ResidentPanel,
    white_exposure: ExposureVector,
    nonwhite_exposure: ExposureVector,
    uhat: Optional[np.ndarray] = None,
) -> Tuple[DesignMatrix, np.ndarray]:
    """Race-stratified exposures with interactions on the resident's own race.

    Columns: intercept, peer_grad_white, peer_grad_nonwhite,
    peer_grad_white_x_white, peer_grad_nonwhite_x_white, age, white, lsi.
    Residents missing either exposure are dropped.
    """
    _check_alignment(panel, white_exposure)
    _check_alignment(panel, nonwhite_exposure)
    mask = white_exposure.present() & nonwhite_exposure.present()
    white = panel.column("white")[mask]
    from_white = white_exposure.as_array()[mask]
    from_nonwhite = nonwhite_exposure.as_array()[mask]
    columns = {
        "peer_grad_white": from_white,
        "peer_grad_nonwhite": from_nonwhite,
        "peer_grad_white_x_white": from_white * white,
        "peer_grad_nonwhite_x_white": from_nonwhite * white,
    }
    for name in TC_COVARIATES:
        columns[name] = panel.column(name)[mask]
    design = build_design(columns, uhat=_rows(uhat, mask), peer_columns=list(columns)[:4])
    return design, mask


def _check_alignment(panel: ResidentPanel, exposure: ExposureVector) -> None:
    if exposure.ids != panel.ids:
        raise ConfigError(f"exposure '{exposure.definition}' is not aligned with the resident panel")


def _rows(uhat: Optional[np.ndarray], mask: np.ndarray) -> Optional[np.ndarray]:
    return None if uhat is None else np.asarray(uhat)[mask]
