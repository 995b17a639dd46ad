"""Network-side data models: graphs, latent factors, embeddings, covariances."""

from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SYMMETRY_TOLERANCE = 1e-10


def _as_float_array(value, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return array


class Graph(BaseModel):
    """Weighted undirected network (directed only for sender-only exposure weights)."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    weights: np.ndarray = Field(..., description="n x n nonnegative weights, zero diagonal")
    directed: bool = Field(
        False,
        description="True only for sender-only weights; row i holds what i received"
    )

    @field_validator("weights", mode="before")
    @classmethod
    def _validate_weights(cls, value):
        matrix = _as_float_array(value, 2, "weights")
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"weights must be square, got shape {matrix.shape}")
        if (matrix < 0).any():
            raise ValueError("weights must be nonnegative")
        if np.any(np.diag(matrix) != 0):
            raise ValueError("weights must have a zero diagonal")
        return matrix

    @model_validator(mode="after")
    def _check_symmetry(self):
        if self.directed or np.array_equal(self.weights, self.weights.T):
            return self
        scale = max(1.0, float(np.abs(self.weights).max()))
        if np.abs(self.weights - self.weights.T).max() > SYMMETRY_TOLERANCE * scale:
            raise ValueError("undirected graph weights must be symmetric")
        self.weights = (self.weights + self.weights.T) / 2.0
        return self

    @property
    def n(self) -> int:
        """Number of nodes."""
        return self.weights.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        """Weighted degree (row sums)."""
        return self.weights.sum(axis=1)

    @property
    def density(self) -> float:
        """Fraction of node pairs joined by a positive weight."""
        if self.n < 2:
            return 0.0
        positive = np.count_nonzero(self.weights > 0)
        return positive / (self.n * (self.n - 1))

    def positive_weights(self) -> np.ndarray:
        """Weights of the observed edges (upper triangle for undirected graphs)."""
        if self.directed:
            values = self.weights[~np.eye(self.n, dtype=bool)]
        else:
            values = self.weights[np.triu_indices(self.n, k=1)]
        return values[values > 0]

    def binarized(self) -> "Graph":
        """Copy with every positive weight mapped to 1."""
        return Graph(weights=(self.weights > 0).astype(float), directed=self.directed)

    def symmetrized(self) -> "Graph":
        """Undirected version (sums both directions of a directed graph)."""
        if not self.directed:
            return self
        return Graph(weights=self.weights + self.weights.T)


class LatentFactors(BaseModel):
    """Scaled latent positions U = sqrt(scale) X with ||X_i|| <= 1."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: np.ndarray = Field(..., description="n x d latent position matrix U")
    scale: float = Field(1.0, gt=0, description="Sparsity factor theta_n")
    memberships: Optional[np.ndarray] = Field(None, description="Cluster label per node")
    degrees: Optional[np.ndarray] = Field(None, description="Degree parameters (DCSBM)")
    degree_cap: Optional[float] = Field(
        None, description="Cap applied to degree parameters, if any were truncated"
    )

    @field_validator("values", mode="before")
    @classmethod
    def _validate_values(cls, value):
        return _as_float_array(value, 2, "values")

    @model_validator(mode="after")
    def _check_norms(self):
        norms = np.linalg.norm(self.values, axis=1)
        if norms.size and norms.max() > np.sqrt(self.scale) + 1e-9:
            raise ValueError(
                f"row norm {norms.max():.6g} exceeds sqrt(scale) = {np.sqrt(self.scale):.6g}"
            )
        return self

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def probabilities(self) -> np.ndarray:
        """Edge probability matrix P = U U^T (diagonal included)."""
        return self.values @ self.values.T


class Embedding(BaseModel):
    """Adjacency spectral embedding U_hat = Q Sigma^{1/2}."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    uhat: np.ndarray = Field(..., description="n x d estimated latent positions")
    singular_values: np.ndarray = Field(..., description="Top-d singular values, nonincreasing")

    @field_validator("uhat", mode="before")
    @classmethod
    def _validate_uhat(cls, value):
        return _as_float_array(value, 2, "uhat")

    @field_validator("singular_values", mode="before")
    @classmethod
    def _validate_singular_values(cls, value):
        values = _as_float_array(value, 1, "singular_values")
        if (values <= 0).any():
            raise ValueError("singular values must be strictly positive")
        if np.any(np.diff(values) > 0):
            raise ValueError("singular values must be nonincreasing")
        return values

    @model_validator(mode="after")
    def _check_shapes(self):
        if self.uhat.shape[1] != self.singular_values.shape[0]:
            raise ValueError("uhat columns and singular values disagree in length")
        return self

    @property
    def n(self) -> int:
        return self.uhat.shape[0]

    @property
    def d(self) -> int:
        return self.uhat.shape[1]

    def gram(self) -> np.ndarray:
        """U_hat U_hat^T, invariant to the rotation ambiguity."""
        return self.uhat @ self.uhat.T


class AucCurve(BaseModel):
    """Held-out link prediction AUC as a function of embedding dimension."""
    dims: List[int] = Field(..., description="Candidate dimensions")
    auc: List[float] = Field(..., description="Mean held-out AUC per candidate")
    chosen_d: int = Field(..., description="Selected dimension")
    tolerance: float = Field(0.005, description="Plateau tolerance used for the choice")

    @model_validator(mode="after")
    def _check_curve(self):
        if len(self.dims) != len(self.auc):
            raise ValueError("dims and auc must have the same length")
        if self.chosen_d not in self.dims:
            raise ValueError("chosen_d must be one of the candidate dimensions")
        if any(a < 0 or a > 1 for a in self.auc):
            raise ValueError("AUC values must lie in [0, 1]")
        return self


class NodeCovariances(BaseModel):
    """Per-node measurement-error covariance estimates of the embedding."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    per_node: np.ndarray = Field(..., description="n x d x d stack of covariance matrices")
    variant: Literal["rdpg-plugin", "sbm-cluster"] = Field(..., description="Estimator used")
    cluster_assignments: Optional[np.ndarray] = Field(
        None, description="Cluster label per node (sbm-cluster only)"
    )

    @field_validator("per_node", mode="before")
    @classmethod
    def _validate_per_node(cls, value):
        stack = _as_float_array(value, 3, "per_node")
        if stack.shape[1] != stack.shape[2]:
            raise ValueError("per-node covariance matrices must be square")
        asymmetry = np.abs(stack - stack.transpose(0, 2, 1))
        if asymmetry.size and asymmetry.max() > SYMMETRY_TOLERANCE * max(1.0, np.abs(stack).max()):
            raise ValueError("per-node covariance matrices must be symmetric")
        stack = (stack + stack.transpose(0, 2, 1)) / 2.0
        if stack.size and np.linalg.eigvalsh(stack).min() < -1e-8:
            raise ValueError("per-node covariance matrices must be positive semidefinite")
        return stack

    @property
    def n(self) -> int:
        return self.per_node.shape[0]

    @property
    def d(self) -> int:
        return self.per_node.shape[1]

    def total(self) -> np.ndarray:
        """Sum of the per-node matrices."""
        return self.per_node.sum(axis=0)


class OmegaMatrix(BaseModel):
    """Bias-correction matrix: summed node covariances in the latent block, zero elsewhere."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    matrix: np.ndarray = Field(..., description="(d+q) x (d+q) correction matrix")
    d_latent: int = Field(..., ge=0, description="Size of the leading latent block")

    @field_validator("matrix", mode="before")
    @classmethod
    def _validate_matrix(cls, value):
        matrix = _as_float_array(value, 2, "matrix")
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError("Omega must be square")
        if not np.allclose(matrix, matrix.T, atol=1e-12, rtol=0):
            raise ValueError("Omega must be symmetric")
        return matrix

    @model_validator(mode="after")
    def _check_blocks(self):
        d = self.d_latent
        outside = self.matrix.copy()
        outside[:d, :d] = 0.0
        if np.any(outside != 0):
            raise ValueError("Omega must be zero outside the latent block")
        return self

    @property
    def latent_block(self) -> np.ndarray:
        return self.matrix[: self.d_latent, : self.d_latent]
