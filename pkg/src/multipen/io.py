"""Plain-text matrix/vector files and CSV reports.

Matrix file: a line ``m N`` followed by m rows of N numbers.
Vector file: the length on the first line, then one value per line.
Numbers are written with 17 significant digits so that they round-trip
exactly; report CSVs use 6 significant digits.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def _full(x: float) -> str:
    return f"{x:.17g}"


def fmt6(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.6g}"
    return str(x)


def write_matrix(path, M) -> None:
    M = np.asarray(M, dtype=float)
    m, N = M.shape
    lines = [f"{m} {N}"] + [" ".join(_full(x) for x in row) for row in M]
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path) -> np.ndarray:
    tokens = Path(path).read_text().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing 'm N' header")
    m, N = int(tokens[0]), int(tokens[1])
    values = tokens[2:]
    if m < 1 or N < 1 or len(values) != m * N:
        raise ValueError(f"{path}: expected {m}x{N} entries, found {len(values)}")
    M = np.array([float(t) for t in values]).reshape(m, N)
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{path}: non-finite matrix entries")
    return M


def write_vector(path, x) -> None:
    x = np.asarray(x, dtype=float).ravel()
    Path(path).write_text("\n".join([str(x.size)] + [_full(v) for v in x]) + "\n")


def read_vector(path) -> np.ndarray:
    tokens = Path(path).read_text().split()
    if not tokens:
        raise ValueError(f"{path}: empty vector file")
    n = int(tokens[0])
    if len(tokens) - 1 != n:
        raise ValueError(f"{path}: expected {n} values, found {len(tokens) - 1}")
    return np.array([float(t) for t in tokens[1:]])


def write_report(rows: Iterable[Sequence], path, header: Sequence[str], config: str | None = None) -> None:
    """CSV with an optional ``# config: ...`` provenance line, a header, then rows."""
    with open(path, "w", newline="") as fh:
        if config is not None:
            fh.write(f"# config: {config}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt6(x) for x in row])


def read_report(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return header, [row for row in reader]
