"""Graph CSV reading and writing.

Two formats are supported: a sparse edge list (``src,dst,weight``, each
undirected edge once with src < dst) and a dense headerless matrix. Floats are
written with ``repr`` so both formats round-trip bit-exactly.
"""

import csv
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..errors import ConfigError, DataError
from ..models import Graph

EDGE_HEADER = ["src", "dst", "weight"]

PathLike = Union[str, Path]


def write_edge_list(graph: Graph, path: PathLike) -> None:
    """Write the positive-weight edges of an undirected graph."""
    if graph.directed:
        raise ConfigError("edge-list export supports undirected graphs only")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    rows, cols = np.nonzero(np.triu(graph.weights, k=1))
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(EDGE_HEADER)
        for i, j in zip(rows, cols):
            writer.writerow([int(i), int(j), repr(float(graph.weights[i, j]))])


def read_edge_list(path: PathLike, n: Optional[int] = None) -> Graph:
    """Read an edge list written by :func:`write_edge_list`.

    Args:
        path: CSV file with a ``src,dst,weight`` header
        n: Node count; defaults to the largest node index plus one

    Returns:
        Undirected Graph

    Raises:
        DataError: On a bad header, a malformed row or a self loop
    """
    path = _existing(path)
    edges = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != EDGE_HEADER:
            raise DataError(f"expected header {','.join(EDGE_HEADER)}", row=1, path=str(path))
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                src, dst, weight = int(row[0]), int(row[1]), float(row[2])
            except (IndexError, ValueError):
                raise DataError(f"malformed edge {row}", row=row_number, path=str(path))
            if src == dst or src < 0 or dst < 0 or weight < 0:
                raise DataError(f"invalid edge {row}", row=row_number, path=str(path))
            edges.append((src, dst, weight))

    size = n if n is not None else (max(max(s, d) for s, d, _ in edges) + 1 if edges else 0)
    weights = np.zeros((size, size))
    for src, dst, weight in edges:
        if max(src, dst) >= size:
            raise DataError(f"node index {max(src, dst)} exceeds n={size}", path=str(path))
        weights[src, dst] = weight
        weights[dst, src] = weight
    return Graph(weights=weights)


def write_dense(graph: Graph, path: PathLike) -> None:
    """Write the full weight matrix, one row per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in graph.weights:
            writer.writerow([repr(float(value)) for value in row])


def read_dense(path: PathLike, directed: bool = False) -> Graph:
    """Read a dense weight matrix written by :func:`write_dense`."""
    path = _existing(path)
    rows = []
    with open(path, newline="", encoding="utf-8") as f:
        for row_number, row in enumerate(csv.reader(f), start=1):
            try:
                rows.append([float(value) for value in row])
            except ValueError:
                raise DataError("non-numeric entry", row=row_number, path=str(path))
    if any(len(row) != len(rows) for row in rows):
        raise DataError("dense matrix must be square", path=str(path))
    try:
        return Graph(weights=np.array(rows, dtype=float).reshape(len(rows), len(rows)),
                     directed=directed)
    except ValueError as e:
        raise DataError(str(e), path=str(path))


def read_graph(path: PathLike, n: Optional[int] = None) -> Graph:
    """Read either format, detected from the first line."""
    path = _existing(path)
    with open(path, encoding="utf-8") as f:
        first = f.readline().strip()
    if first == ",".join(EDGE_HEADER):
        return read_edge_list(path, n=n)
    return read_dense(path)


def _existing(path: PathLike) -> Path:
    path = Path(path)
    if not path.is_file():
        raise DataError("file not found", path=str(path))
    return path
