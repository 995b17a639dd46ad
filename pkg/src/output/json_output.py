"""JSON output handler for RoleModel."""

import json
from pathlib import Path
from typing import Any, Sequence, Union

from pydantic import BaseModel

from .base import OutputHandler


class JSONOutput(OutputHandler):
    """JSON output handler that writes results to a JSON file."""

    def __init__(self, output_file: Union[str, Path]):
        """Initialize JSON output handler.

        Args:
            output_file: Path to the output JSON file
        """
        self.output_file = Path(output_file)

    def write(self, results: Sequence[BaseModel]) -> None:
        """Write results as a JSON list with sorted keys.

        Args:
            results: Pydantic result models
        """
        write_json(self.output_file, [result.model_dump(mode="json") for result in results])


def write_json(path: Union[str, Path], payload: Any) -> None:
    """Deterministic JSON: sorted keys, 2-space indent, trailing newline."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
