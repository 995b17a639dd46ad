"""Configuration models for RoleModel."""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator


class LatentConfig(BaseModel):
    """Latent position configuration for the RDPG family of generators."""
    n: int = Field(..., ge=1, description="Node count")
    d: int = Field(..., ge=1, description="Latent dimension")
    kind: Literal["rdpg-generic", "sbm", "dcsbm"] = Field(..., description="Generator family")
    cluster_directions: List[List[float]] = Field(
        default_factory=list,
        description="K x d matrix of cluster direction rows (J or the SBM U rows)"
    )
    cluster_probs: List[float] = Field(
        default_factory=list, description="Length-K membership probabilities"
    )
    degree_dist: Tuple[float, float] = Field(
        (0.0, 0.5), description="Lognormal (log-mean, log-sd) of DCSBM degree parameters"
    )
    target_density: Optional[float] = Field(
        None, gt=0, le=1, description="Expected off-diagonal mean of P after rescaling"
    )
    truncate_degrees: bool = Field(
        True, description="Winsorise DCSBM degrees when the density target forces P > 1"
    )
    seed: int = Field(0, description="64-bit seed")

    @model_validator(mode="after")
    def _check_config(self):
        if self.n < self.d:
            raise ValueError("n must be at least d")
        if self.cluster_probs and abs(sum(self.cluster_probs) - 1.0) > 1e-12:
            raise ValueError("cluster_probs must sum to 1")
        if any(p < 0 for p in self.cluster_probs):
            raise ValueError("cluster_probs must be nonnegative")
        if self.degree_dist[1] < 0:
            raise ValueError("degree log-sd must be nonnegative")
        return self


StudyName = Literal["A", "B", "C", "D"]


class StudyConfig(BaseModel):
    """One Monte Carlo simulation study."""
    study: StudyName = Field(..., description="A dcsbm-n, B dcsbm-density, C sbm-n, D signed-bias")
    sweep: List[float] = Field(..., min_length=1, description="Sweep values (n, density or m)")
    reps: int = Field(200, ge=1, description="Replicates per sweep value")
    alpha: float = Field(0.6, description="Autoregressive coefficient")
    rho: float = Field(0.3, description="Peer influence coefficient")
    beta: List[float] = Field(..., min_length=1, description="Latent coefficient vector")
    beta_prev_multiplier: float = Field(1.0, description="m: multiplier of beta in the Y2 equation")
    noise_sd: float = Field(1.0, gt=0, description="SD of the iid normal innovations")
    n: int = Field(200, ge=2, description="Node count when n is not swept")
    density: float = Field(0.20, gt=0, le=1, description="Density when density is not swept")
    covariance: Literal["rdpg", "sbm"] = Field("rdpg", description="Node covariance estimator")
    k_clusters: Optional[int] = Field(None, ge=1, description="Clusters for the sbm estimator")
    include_oracle: bool = Field(False, description="Also fit the regression on the true U")
    max_resample_rate: float = Field(0.05, ge=0, le=1, description="Tolerated failed-replicate rate")
    workers: int = Field(1, ge=1, description="Worker processes for replicates")
    seed: int = Field(0, description="Master seed")

    @field_validator("alpha", "rho")
    @classmethod
    def _finite(cls, value: float) -> float:
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError("must be finite")
        return value

    @model_validator(mode="after")
    def _check_clusters(self):
        if self.covariance == "sbm" and self.k_clusters is None:
            raise ValueError("the sbm covariance estimator needs k_clusters")
        return self


class EstimateConfig(BaseModel):
    """Options of the TC estimation pipeline."""
    d: Optional[int] = Field(None, ge=1, description="Embedding dimension (None: select or 2)")
    select_d: bool = Field(False, description="Choose d by held-out link-prediction AUC")
    d_max: int = Field(20, ge=1, description="Largest candidate dimension for selection")
    auc_folds: int = Field(5, ge=1, description="Cross-validation folds for selection")
    holdout_frac: float = Field(0.1, gt=0, le=0.5, description="Fraction of observed edges hidden per fold")
    covariance: Literal["rdpg", "sbm"] = Field("rdpg", description="Node covariance estimator")
    k_clusters: Optional[int] = Field(None, ge=1, description="Clusters for the sbm estimator")
    definition: Literal["def1", "def2"] = Field("def1", description="Role-model definition")
    binarize: bool = Field(False, description="Also fit on the binarized network")
    race_interactions: bool = Field(False, description="Also fit race-stratified exposures")
    logistic: bool = Field(False, description="Also fit the logistic AME variant")
    adjacency: Literal["sum", "received"] = Field("sum", description="Edge direction handling")
    seed: int = Field(0, description="Master seed")

    @model_validator(mode="after")
    def _check_clusters(self):
        if self.covariance == "sbm" and self.k_clusters is None:
            raise ValueError("the sbm covariance estimator needs k_clusters")
        return self


class InterventionConfig(BaseModel):
    """Buddy-assignment counterfactual settings."""
    targeting: Literal["true-failures", "lsi-percentile"] = Field(
        "true-failures", description="How at-risk residents are selected"
    )
    lsi_percentile: float = Field(90.0, gt=0, lt=100, description="LSI percentile cutoff")
    buddy_weight: Optional[float] = Field(
        None, ge=0, description="Affirmation weight added by the buddy (None: unit median)"
    )
    threshold_grid: float = Field(0.001, gt=0, le=0.5, description="Threshold search resolution")
    seed: int = Field(0, description="Seed recorded with the report")


class RunConfig(BaseModel):
    """Echo of a CLI invocation, written into every manifest."""
    subcommand: Literal["simulate", "embed", "estimate", "counterfactual", "gen-synthetic"] = Field(
        ..., description="CLI subcommand"
    )
    inputs: Dict[str, str] = Field(default_factory=dict, description="Input paths by role")
    output_dir: str = Field(..., description="Output directory")
    seed: int = Field(..., description="Master seed")
    options: Dict[str, object] = Field(default_factory=dict, description="Remaining options")
