"""Exception hierarchy for RoleModel.

Every error maps to a CLI exit code: 2 configuration, 3 data, 4 numerical.
"""

from typing import Any, Dict, List, Optional


class RoleModelError(Exception):
    """Base class for all RoleModel errors."""

    exit_code = 1

    def __init__(self, message: str, **extra: Any):
        super().__init__(message)
        self.message = message
        self.extra = extra

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form printed by the CLI."""
        payload = {
            "error": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
        }
        payload.update({k: v for k, v in self.extra.items() if v is not None})
        return payload


class ConfigError(RoleModelError):
    """Invalid configuration or arguments."""

    exit_code = 2


class DataError(RoleModelError):
    """Malformed or inconsistent input data."""

    exit_code = 3

    def __init__(self, message: str, row: Optional[int] = None, path: Optional[str] = None):
        if row is not None:
            message = f"{message} (row {row})"
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message, row=row, path=path)
        self.row = row
        self.path = path


class NumericalError(RoleModelError):
    """A numerical procedure could not produce a valid result."""

    exit_code = 4


class InvalidLatentConfigError(NumericalError):
    """Latent positions imply edge probabilities outside [0, 1]."""


class RankDeficiencyError(NumericalError):
    """Design or embedding is rank deficient."""

    def __init__(self, message: str, columns: Optional[List[str]] = None):
        super().__init__(message, columns=columns)
        self.columns = columns or []


class CollinearEmbeddingError(NumericalError):
    """The second moment matrix of the embedding is singular."""


class OverCorrectionError(NumericalError):
    """M_WU - Omega is not positive definite."""


class SeparationError(NumericalError):
    """Logistic coefficients diverge (perfect separation)."""


class ConvergenceError(NumericalError):
    """An iterative fit did not converge."""

    def __init__(self, message: str, iterations: Optional[int] = None):
        super().__init__(message, iterations=iterations)
        self.iterations = iterations


class DegenerateFoldError(NumericalError):
    """A cross-validation fold kept producing identical held-out labels."""


class EmptyClusterError(NumericalError):
    """k-means kept returning an empty cluster."""


class ReplicateFailureError(NumericalError):
    """Too many Monte Carlo replicates failed and had to be resampled."""
