"""Base output handler for RoleModel."""

from abc import ABC, abstractmethod
from typing import Any, Sequence

from pydantic import BaseModel


class OutputHandler(ABC):
    """Base class for output handlers."""

    @abstractmethod
    def write(self, results: Sequence[BaseModel]) -> None:
        """Write results to output.

        Args:
            results: Bias tables, estimate reports or cascade reports
        """
        pass


def format_value(value: Any) -> str:
    """CSV cell: shortest round-trip repr for floats, empty for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)
