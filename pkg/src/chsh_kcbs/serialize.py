"""Serialization glue: matrix JSON format, atomic CSV and JSON output.

Matrices and state vectors serialize to ``{"rows", "cols", "entries"}``
with the entries as a flat row-major list of [re, im] pairs.  CSV files
start with ``# key: value`` metadata lines (the effective configuration,
plus a timestamp unless suppressed), then the header row, then data rows
with 9 significant digits.  All writes go through a temp file and an
atomic rename so a failure never leaves a partial output behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime, timezone

import numpy as np


def matrix_to_json(mat) -> dict:
    """Encode a matrix or vector as rows/cols/flat [re, im] entries."""
    arr = np.asarray(mat, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix or vector, got ndim {arr.ndim}")
    entries = [[float(v.real), float(v.imag)] for v in arr.reshape(-1)]
    return {"rows": int(arr.shape[0]), "cols": int(arr.shape[1]), "entries": entries}


def matrix_from_json(payload: dict) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`."""
    rows, cols = int(payload["rows"]), int(payload["cols"])
    entries = payload["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"need {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(rows, cols)


def format_float(value) -> str:
    """Nine significant digits; empty string for missing values."""
    if value is None:
        return ""
    return f"{value:.9g}"


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def timestamp_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def write_csv(path: str, header: list[str], rows: list[list], metadata: dict | None = None,
              timestamp: bool = True):
    """Write a CSV with a commented metadata block, atomically."""
    lines = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}: {value}")
    if timestamp:
        lines.append(f"# timestamp: {timestamp_now()}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _format_cell(cell) -> str:
    if isinstance(cell, str):
        return cell
    if isinstance(cell, (int, np.integer)):
        return str(int(cell))
    return format_float(cell)


def read_csv(path: str) -> tuple[list[str], list[list[str]], dict]:
    """Read back a CSV written by :func:`write_csv`.

    Returns (header, rows-as-strings, metadata).
    """
    metadata: dict = {}
    header: list[str] = []
    rows: list[list[str]] = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                metadata[key.strip()] = value.strip()
            elif not header:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    return header, rows, metadata


def write_json(path: str, payload: dict, metadata: dict | None = None,
               timestamp: bool = True):
    """Write JSON with an embedded metadata block, atomically."""
    body = dict(payload)
    meta = dict(metadata or {})
    if timestamp:
        meta["timestamp"] = timestamp_now()
    if meta:
        body["metadata"] = meta
    _atomic_write(path, json.dumps(body, indent=2) + "\n")
