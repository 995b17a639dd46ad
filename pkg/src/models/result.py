"""Result data models for RoleModel."""

import math
from typing import Any, ClassVar, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

Method = Literal["ols", "homophily-ols", "bias-corrected", "logistic-ame"]
StudyMethod = Literal["no-latent", "uncorrected-Û", "bias-corrected", "oracle"]


class EstimateReport(BaseModel):
    """Fitted outcome model: coefficients in design order (latent block first)."""
    coefficients: Dict[str, float] = Field(..., description="Coefficient by column label")
    std_errors: Dict[str, float] = Field(..., description="Standard error by column label")
    peer_columns: List[str] = Field(default_factory=list, description="Peer-exposure columns")
    latent_columns: List[str] = Field(default_factory=list, description="Latent block columns")
    method: Method = Field(..., description="Estimator used")
    n_obs: int = Field(..., ge=0, description="Rows used in the fit")
    condition_number: float = Field(..., description="Condition number of the solved system")
    specification: str = Field("main", description="Name of the model specification")
    details: Dict[str, Any] = Field(default_factory=dict, description="Estimator-specific extras")

    @model_validator(mode="after")
    def _check_report(self):
        if list(self.coefficients) != list(self.std_errors):
            raise ValueError("coefficients and std_errors must share labels and order")
        for label, se in self.std_errors.items():
            if not se >= 0:
                raise ValueError(f"standard error of {label} must be nonnegative")
        for label in self.peer_columns:
            if label not in self.coefficients:
                raise ValueError(f"peer column {label} missing from coefficients")
        return self

    @property
    def labels(self) -> List[str]:
        return list(self.coefficients)

    @property
    def peer_effects(self) -> Dict[str, float]:
        """All peer-exposure coefficients by name."""
        return {label: self.coefficients[label] for label in self.peer_columns}

    @property
    def rho(self) -> Optional[float]:
        """The (first) peer-effect coefficient."""
        if not self.peer_columns:
            return None
        return self.coefficients[self.peer_columns[0]]

    @property
    def rho_se(self) -> Optional[float]:
        if not self.peer_columns:
            return None
        return self.std_errors[self.peer_columns[0]]

    def csv_row(self) -> Dict[str, Any]:
        """Flat row: metadata then coef_<label> and se_<label> pairs."""
        row: Dict[str, Any] = {
            "specification": self.specification,
            "method": self.method,
            "n_obs": self.n_obs,
            "condition_number": self.condition_number,
        }
        for label in self.labels:
            row[f"coef_{label}"] = self.coefficients[label]
            row[f"se_{label}"] = self.std_errors[label]
        return row


class BiasRow(BaseModel):
    """Monte Carlo summary of one method at one sweep value."""
    sweep: float = Field(..., description="Sweep value (n, density or m)")
    method: StudyMethod = Field(..., description="Estimator")
    mean_rho_hat: float = Field(..., description="Mean of rho-hat over replicates")
    bias: float = Field(..., description="mean_rho_hat - rho")
    mc_se: float = Field(..., ge=0, description="Monte Carlo standard error of the bias")
    reps: int = Field(..., ge=1, description="Replicates aggregated")


class BiasTable(BaseModel):
    """Long-format bias table of a simulation study."""
    columns: ClassVar[List[str]] = ["sweep", "method", "mean_rho_hat", "bias", "mc_se"]

    study: str = Field(..., description="Study name")
    rho: float = Field(..., description="True peer effect")
    rows: List[BiasRow] = Field(default_factory=list, description="One row per (sweep, method)")
    resampled: int = Field(0, ge=0, description="Replicates resampled after a failure")

    @model_validator(mode="after")
    def _unique_rows(self):
        keys = [(row.sweep, row.method) for row in self.rows]
        if len(set(keys)) != len(keys):
            raise ValueError("one row per (sweep value, method) expected")
        return self

    def row(self, sweep: float, method: str) -> BiasRow:
        """Look up a row; raises KeyError if absent."""
        for candidate in self.rows:
            if math.isclose(candidate.sweep, sweep) and candidate.method == method:
                return candidate
        raise KeyError((sweep, method))

    def methods(self) -> List[str]:
        return list(dict.fromkeys(row.method for row in self.rows))

    def sweeps(self) -> List[float]:
        return list(dict.fromkeys(row.sweep for row in self.rows))


class CascadeTrace(BaseModel):
    """Per-resident propensities through the cascade."""
    id: str
    graduated: int = Field(..., description="True outcome S_i")
    pre: float = Field(..., description="Step-0 fitted propensity")
    step1: float = Field(..., description="Propensity after the buddy (targets only change)")
    step2: float = Field(..., description="Propensity after re-estimation")
    targeted: bool = Field(False, description="Selected for a buddy")
    treated: bool = Field(False, description="Crossed the threshold because of the buddy")
    working_outcome: int = Field(..., description="Outcome used for re-estimation")


class CascadeReport(BaseModel):
    """Outcome of one buddy-intervention counterfactual."""
    label: str = Field(..., description="Run label, e.g. lsi>90 or true-failures")
    targeting: str = Field(..., description="Targeting rule")
    lsi_percentile: Optional[float] = Field(None, description="LSI cutoff percentile if used")
    buddy_weight: float = Field(..., ge=0, description="Buddy affirmation weight")
    threshold: float = Field(..., ge=0, le=1, description="Graduation threshold")
    targeted_count: int = Field(..., ge=0, description="Residents given a buddy")
    treated_count: int = Field(..., ge=0, description="Targets pushed over the threshold")
    failures_true: int = Field(..., ge=0, description="Residents with S_i = 0")
    below_threshold_pre: int = Field(..., ge=0, description="Below threshold before intervention")
    below_threshold_post: int = Field(..., ge=0, description="Below threshold after the cascade")
    n: int = Field(..., ge=0, description="Residents in the estimation sample")
    seed: int = Field(0, description="Seed of the run")
    trace: List[CascadeTrace] = Field(default_factory=list, description="Per-resident trace")

    @model_validator(mode="after")
    def _check_counts(self):
        if self.treated_count > self.n or self.targeted_count > self.n:
            raise ValueError("counts cannot exceed the number of residents")
        return self
