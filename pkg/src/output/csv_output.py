"""CSV output handlers for RoleModel."""

import csv
from pathlib import Path
from typing import Any, List, Sequence, Union

import numpy as np
from pydantic import BaseModel

from .base import OutputHandler, format_value
from ..models import AucCurve, BiasTable, CascadeReport, Embedding, EstimateReport, NodeCovariances

CASCADE_ROWS = [
    ("Threshold for graduation", "threshold"),
    ("Residents targeted", "targeted_count"),
    ("Residents treated", "treated_count"),
    ("True failures", "failures_true"),
    ("Below threshold (pre-simulation)", "below_threshold_pre"),
    ("Below threshold (post-simulation)", "below_threshold_post"),
    ("Buddy weight", "buddy_weight"),
    ("Residents", "n"),
]


class CSVOutput(OutputHandler):
    """Writes bias tables, estimate reports or cascade summaries to one CSV file."""

    def __init__(self, output_file: Union[str, Path]):
        """Initialize CSV output handler.

        Args:
            output_file: Path to the output CSV file
        """
        self.output_file = Path(output_file)

    def write(self, results: Sequence[BaseModel]) -> None:
        """Write results; all entries must be of the same kind.

        Args:
            results: BiasTables (long format), EstimateReports (one row each)
                or CascadeReports (one column per run)
        """
        results = list(results)
        if not results:
            header, rows = [], []
        elif isinstance(results[0], BiasTable):
            header, rows = bias_rows(results)
        elif isinstance(results[0], EstimateReport):
            header, rows = estimate_rows(results)
        elif isinstance(results[0], CascadeReport):
            header, rows = cascade_summary_rows(results)
        else:
            raise TypeError(f"no CSV layout for {type(results[0]).__name__}")
        write_rows(self.output_file, header, rows)


def bias_rows(tables: List[BiasTable]):
    header = list(BiasTable.columns)
    rows = [[getattr(row, column) for column in header] for table in tables for row in table.rows]
    return header, rows


def estimate_rows(reports: List[EstimateReport]):
    """Flat rows; the header is the union of keys in first-seen order."""
    flat = [report.csv_row() for report in reports]
    header: List[str] = []
    for row in flat:
        header.extend(key for key in row if key not in header)
    return header, [[row.get(key) for key in header] for row in flat]


def cascade_summary_rows(reports: List[CascadeReport]):
    """One row per quantity and one column per run."""
    header = ["quantity"] + [report.label for report in reports]
    rows = [[title] + [getattr(report, field) for report in reports] for title, field in CASCADE_ROWS]
    return header, rows


def write_rows(path: Union[str, Path], header: List[str], rows: List[List[Any]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        if header:
            writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])


def write_embedding(embedding: Embedding, path: Union[str, Path]) -> None:
    """n rows of d columns at 17 significant digits."""
    header = [f"u{k + 1}" for k in range(embedding.d)]
    rows = [[format(float(value), ".17g") for value in row] for row in embedding.uhat]
    write_rows(path, header, rows)


def write_auc_curve(curve: AucCurve, path: Union[str, Path]) -> None:
    write_rows(path, ["d", "auc"], [[d, float(auc)] for d, auc in zip(curve.dims, curve.auc)])


def write_node_covariances(cov: NodeCovariances, path: Union[str, Path]) -> None:
    """Long format ``node,row,col,value``."""
    rows = [
        [node, r, c, float(cov.per_node[node, r, c])]
        for node in range(cov.n) for r in range(cov.d) for c in range(cov.d)
    ]
    write_rows(path, ["node", "row", "col", "value"], rows)


def write_misclassification(
    grid: np.ndarray, errors: np.ndarray, path: Union[str, Path]
) -> None:
    write_rows(path, ["threshold", "error"],
               [[float(t), float(e)] for t, e in zip(grid, errors)])


def write_trace(report: CascadeReport, path: Union[str, Path]) -> None:
    """Per-resident propensities of one cascade."""
    header = list(report.trace[0].model_dump()) if report.trace else []
    write_rows(path, header, [list(entry.model_dump().values()) for entry in report.trace])
