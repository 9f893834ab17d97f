"""JSON matrix file format.

A matrix is an object ``{"rows": n, "cols": m, "entries": [...]}`` with the
entries row-major.  Each entry is either a bare real number or a ``[re, im]``
pair; the parser accepts both, the serializer always emits pairs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError


def matrix_from_dict(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFormatError("matrix payload must be a JSON object")
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"matrix object needs integer 'rows'/'cols' and 'entries': {exc}")
    if rows <= 0 or cols <= 0:
        raise MatrixFormatError(f"rows and cols must be positive, got {rows}x{cols}")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise MatrixFormatError(
            f"'entries' must hold exactly rows*cols = {rows * cols} values, got "
            f"{len(entries) if isinstance(entries, list) else type(entries).__name__}"
        )
    flat = np.empty(rows * cols, dtype=complex)
    for i, e in enumerate(entries):
        if isinstance(e, (int, float)) and not isinstance(e, bool):
            flat[i] = complex(e)
        elif isinstance(e, (list, tuple)) and len(e) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in e
        ):
            flat[i] = complex(e[0], e[1])
        else:
            raise MatrixFormatError(f"entry {i} must be a number or a [re, im] pair, got {e!r}")
    a = flat.reshape(rows, cols)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise MatrixFormatError("matrix entries must be finite")
    return a


def matrix_to_dict(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def load_matrix(path) -> np.ndarray:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFormatError(f"cannot read matrix file {path}: {exc}")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON in {path}: {exc}")
    return matrix_from_dict(obj)


def save_matrix(path, a: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(a)), encoding="utf-8")
