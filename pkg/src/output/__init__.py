"""Output modules for RoleModel."""

from .base import OutputHandler, format_value
from .terminal import TerminalOutput
from .json_output import JSONOutput, write_json
from .csv_output import (
    CSVOutput,
    write_auc_curve,
    write_embedding,
    write_misclassification,
    write_node_covariances,
    write_rows,
    write_trace,
)
from .manifest import write_error, write_manifest, write_timing

__all__ = [
    "OutputHandler",
    "format_value",
    "TerminalOutput",
    "JSONOutput",
    "write_json",
    "CSVOutput",
    "write_auc_curve",
    "write_embedding",
    "write_misclassification",
    "write_node_covariances",
    "write_rows",
    "write_trace",
    "write_error",
    "write_manifest",
    "write_timing",
]
