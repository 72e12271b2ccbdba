"""File emission: CSV tables, 16-bit PGM heatmaps and JSON reports.

CSV files hold one sample per row with 17 significant digits, which is enough
for a float64 to survive a write/read cycle unchanged:

    phase function   x,p,re,im   (x outer, p inner)
    signal           x,re,im
    operator matrix  x,y,re,im   (row x, column y; entries are kernel values)
"""
from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .grid import Grid1D, PhaseFunction, PhaseGrid, SampledSignal
from .pseudodiff import OperatorMatrix

FLOAT_FORMAT = "{:.17g}"
PGM_MAXVAL = 65535


def _fmt(v: float) -> str:
    return FLOAT_FORMAT.format(float(v))


def _write_rows(path, header, columns) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([_fmt(v) for v in row])


def write_csv(obj, path, *, coords=None) -> None:
    """Write a PhaseFunction, SampledSignal, OperatorMatrix or plain array.

    Plain 1-D arrays need ``coords=x``; plain 2-D arrays need ``coords=(x, y)``.
    """
    if isinstance(obj, PhaseFunction):
        X, P = obj.pgrid.mesh()
        v = obj.values
        _write_rows(path, ["x", "p", "re", "im"], [X.ravel(), P.ravel(), v.real.ravel(), v.imag.ravel()])
    elif isinstance(obj, SampledSignal):
        v = obj.values
        _write_rows(path, ["x", "re", "im"], [obj.grid.points, v.real, v.imag])
    elif isinstance(obj, OperatorMatrix):
        x = obj.pgrid.x
        _write_matrix(path, obj.entries, x, x)
    else:
        arr = np.asarray(obj, dtype=complex)
        if coords is None:
            raise ValueError("plain arrays need explicit coordinates")
        if arr.ndim == 1:
            _write_rows(path, ["x", "re", "im"], [np.asarray(coords, float), arr.real, arr.imag])
        elif arr.ndim == 2:
            _write_matrix(path, arr, *coords)
        else:
            raise ValueError(f"cannot write a {arr.ndim}-d array as CSV")


def _write_matrix(path, M, x, y) -> None:
    X, Y = np.meshgrid(np.asarray(x, float), np.asarray(y, float), indexing="ij")
    M = np.asarray(M, dtype=complex)
    _write_rows(path, ["x", "y", "re", "im"], [X.ravel(), Y.ravel(), M.real.ravel(), M.imag.ravel()])


def _read_table(path, header) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        got = next(reader, None)
        if got != header:
            raise ValueError(f"{path}: expected header {','.join(header)}, got {got}")
        rows = [[float(v) for v in r] for r in reader if r]
    return np.array(rows, dtype=float).reshape(-1, len(header))


def read_phase_csv(path, pg: PhaseGrid) -> PhaseFunction:
    t = _read_table(path, ["x", "p", "re", "im"])
    n = pg.n
    if t.shape[0] != n * n:
        raise ValueError(f"{path}: {t.shape[0]} rows, expected {n * n}")
    X, P = pg.mesh()
    if not (np.allclose(t[:, 0], X.ravel(), rtol=0, atol=1e-9 * pg.dx)
            and np.allclose(t[:, 1], P.ravel(), rtol=0, atol=1e-9 * pg.dp)):
        raise ValueError(f"{path}: coordinates do not match the phase grid")
    return PhaseFunction(pg, (t[:, 2] + 1j * t[:, 3]).reshape(n, n))


def read_signal_csv(path, grid: Grid1D) -> SampledSignal:
    t = _read_table(path, ["x", "re", "im"])
    if t.shape[0] != grid.n_points or not np.allclose(t[:, 0], grid.points, rtol=0, atol=1e-9 * grid.dx):
        raise ValueError(f"{path}: sample points do not match the grid")
    return SampledSignal(grid, t[:, 1] + 1j * t[:, 2])


def read_matrix_csv(path, pg: PhaseGrid) -> OperatorMatrix:
    t = _read_table(path, ["x", "y", "re", "im"])
    n = pg.n
    if t.shape[0] != n * n:
        raise ValueError(f"{path}: {t.shape[0]} rows, expected {n * n}")
    return OperatorMatrix(pg, (t[:, 2] + 1j * t[:, 3]).reshape(n, n))


# -- PGM ---------------------------------------------------------------------------


def pgm_pixels(f: PhaseFunction) -> tuple[np.ndarray, float, float]:
    """16-bit image of ``Re f``: rows run from high to low p, columns over x."""
    img = np.real(f.values).T[::-1]
    lo, hi = float(img.min()), float(img.max())
    span = hi - lo
    if span > 0:
        pix = np.rint((img - lo) / span * PGM_MAXVAL)
    else:
        pix = np.zeros_like(img)
    return pix.astype(">u2"), lo, hi


def write_pgm(f: PhaseFunction, path) -> Path:
    """Binary P5 file plus a ``.json`` sidecar with the value range and grid.

    A pixel ``k`` maps back to ``min + k (max - min) / 65535``. Returns the
    sidecar path.
    """
    pix, lo, hi = pgm_pixels(f)
    rows, cols = pix.shape
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n{PGM_MAXVAL}\n".encode("ascii"))
        fh.write(pix.tobytes())
    pg = f.pgrid
    meta = {
        "min": lo,
        "max": hi,
        "maxval": PGM_MAXVAL,
        "component": "real",
        "rows": "p descending",
        "columns": "x ascending",
        "n_points": pg.n,
        "x_min": float(pg.x[0]),
        "dx": pg.dx,
        "p_min": float(pg.p[0]),
        "dp": pg.dp,
        "hbar": pg.hbar,
    }
    side = path.with_name(path.name + ".json")
    write_json(meta, side)
    return side


def read_pgm(path) -> np.ndarray:
    """Pixel array of a 16-bit P5 file written by :func:`write_pgm`."""
    data = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos].decode("ascii"))
    if fields[0] != "P5":
        raise ValueError(f"{path}: not a binary PGM")
    cols, rows, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    dtype = ">u2" if maxval > 255 else "u1"
    return np.frombuffer(data[pos + 1:], dtype=dtype, count=rows * cols).reshape(rows, cols)


# -- JSON --------------------------------------------------------------------------


def to_jsonable(obj):
    """Recursively convert reports, numbers and arrays to JSON-ready values."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _finite(obj.real), "im": _finite(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return _finite(obj)
    return obj


def _finite(v) -> float:
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {v} cannot be written as JSON")
    return v


def write_json(report, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_jsonable(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- report schemas ----------------------------------------------------------------

_NUMBER = {"type": "number"}
_COMPLEX = {
    "type": "object",
    "properties": {"re": _NUMBER, "im": _NUMBER},
    "required": ["re", "im"],
    "additionalProperties": False,
}

COVARIANCE_REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "var_a": {"type": "number", "minimum": -1e-12},
        "var_b": {"type": "number", "minimum": -1e-12},
        "cov": _COMPLEX,
        "cov_sym": _NUMBER,
        "commutator_expectation": _COMPLEX,
        "lhs": _NUMBER,
        "rhs": _NUMBER,
        "satisfied": {"type": "boolean"},
    },
    "required": ["var_a", "var_b", "cov", "cov_sym", "commutator_expectation", "lhs", "rhs", "satisfied"],
}

DEFECT_SCHEMA = {
    "type": "object",
    "properties": {
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "scheme": {"type": "string"},
                    "generator": {"type": "string"},
                    "symbol_id": {"type": "string"},
                    "defect": {"type": "number", "minimum": 0},
                },
                "required": ["scheme", "generator", "symbol_id", "defect"],
            },
        },
        "theta_invariance": {"type": "number", "minimum": 0},
    },
    "required": ["rows"],
}

GHOST_SCHEMA = {
    "type": "object",
    "properties": {
        "signal": {"type": "string"},
        "region": {
            "type": "object",
            "properties": {
                "x_range": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
                "p_range": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
            },
            "required": ["x_range", "p_range"],
        },
        "wigner_energy": {"type": "number", "minimum": 0},
        "bjw_energy": {"type": "number", "minimum": 0},
        "ratio": {"type": "number", "minimum": 0},
    },
    "required": ["wigner_energy", "bjw_energy", "ratio", "region"],
}
