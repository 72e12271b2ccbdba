"""Test signals: Gaussians, Hermite functions, chirps, two-tone pairs, CSV input.

Signal specs use a compact ``kind:arg,arg`` syntax, e.g. ``gaussian:0,0,1``,
``hermite:2``, ``chirp:0.5``, ``two_tone:3,1`` or ``csv:path/to/file.csv``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import Grid1D, SampledSignal

KINDS = ("gaussian", "hermite", "chirp", "two_tone", "from_csv")


@dataclass(frozen=True)
class SignalSpec:
    kind: str
    params: tuple = field(default_factory=tuple)
    normalize: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "gaussian":
            if len(self.params) != 3 or not self.params[2] > 0:
                raise ValueError("gaussian needs (x0, p0, sigma) with sigma > 0")
        elif self.kind == "hermite":
            if len(self.params) != 1 or int(self.params[0]) != self.params[0] or self.params[0] < 0:
                raise ValueError("hermite needs a non-negative integer order")
        elif self.kind == "chirp":
            if len(self.params) != 1:
                raise ValueError("chirp needs a single rate")
        elif self.kind == "two_tone":
            if len(self.params) != 2 or not self.params[1] > 0:
                raise ValueError("two_tone needs (p0, sigma) with sigma > 0")
        elif self.kind == "from_csv":
            if len(self.params) != 1:
                raise ValueError("from_csv needs a path")
            if not Path(self.params[0]).is_file():
                raise FileNotFoundError(self.params[0])

    @classmethod
    def parse(cls, text: str, normalize: bool = True) -> "SignalSpec":
        """Parse ``kind:a,b,c``; ``csv:`` is accepted as an alias of ``from_csv:``."""
        kind, _, rest = text.strip().partition(":")
        kind = kind.strip().lower().replace("-", "_")
        if kind == "csv":
            kind = "from_csv"
        if kind == "from_csv":
            return cls(kind, (rest,), normalize)
        try:
            params = tuple(float(v) for v in rest.split(",")) if rest else ()
        except ValueError as exc:
            raise ValueError(f"bad signal parameters in {text!r}") from exc
        if kind == "hermite" and params:
            params = (int(params[0]),) if params[0] == int(params[0]) else params
        return cls(kind, params, normalize)


def gaussian(x, x0=0.0, p0=0.0, sigma=1.0, hbar=1.0):
    """``(pi sigma^2)^{-1/4} exp(-(x-x0)^2 / 2 sigma^2 + i p0 x / hbar)``."""
    x = np.asarray(x, dtype=float)
    env = (np.pi * sigma**2) ** -0.25 * np.exp(-((x - x0) ** 2) / (2 * sigma**2))
    return env * np.exp(1j * p0 * x / hbar)


def hermite_functions(kmax: int, x, hbar: float = 1.0) -> np.ndarray:
    """Rows ``h_0 .. h_kmax`` evaluated at ``x`` (three-term recurrence, stable for large k)."""
    x = np.asarray(x, dtype=float)
    s = x / np.sqrt(hbar)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = (np.pi * hbar) ** -0.25 * np.exp(-(s**2) / 2)
    if kmax >= 1:
        out[1] = np.sqrt(2.0) * s * out[0]
    for k in range(1, kmax):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * s * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite(k: int, x, hbar: float = 1.0) -> np.ndarray:
    return hermite_functions(k, x, hbar)[k]


def chirped_gaussian(x, rate: float, sigma: float = 1.0, hbar: float = 1.0):
    """Gaussian with linear instantaneous frequency ``rate * x``."""
    x = np.asarray(x, dtype=float)
    return gaussian(x, sigma=sigma, hbar=hbar) * np.exp(0.5j * rate * x**2 / hbar)


def two_tone(x, p0: float = 3.0, sigma: float = 1.0, hbar: float = 1.0):
    """``g(x) (exp(i p0 x/hbar) + exp(-i p0 x/hbar))`` with a Gaussian envelope ``g``."""
    g = gaussian(x, sigma=sigma, hbar=hbar)
    x = np.asarray(x, dtype=float)
    return g * 2 * np.cos(p0 * x / hbar)


def read_signal_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read an ``x,re,im`` CSV; returns (x, complex values)."""
    xs, vals = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"x", "re"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected header x,re,im")
        for row in reader:
            xs.append(float(row["x"]))
            vals.append(complex(float(row["re"]), float(row.get("im") or 0.0)))
    return np.array(xs), np.array(vals)


def generate_signal(spec: SignalSpec | str, grid: Grid1D, hbar: float = 1.0) -> SampledSignal:
    """Sample the signal described by ``spec`` on ``grid``."""
    if isinstance(spec, str):
        spec = SignalSpec.parse(spec)
    x = grid.points
    if spec.kind == "gaussian":
        x0, p0, sigma = spec.params
        vals = gaussian(x, x0, p0, sigma, hbar)
    elif spec.kind == "hermite":
        vals = hermite(int(spec.params[0]), x, hbar)
    elif spec.kind == "chirp":
        vals = chirped_gaussian(x, spec.params[0], np.sqrt(hbar), hbar)
    elif spec.kind == "two_tone":
        p0, sigma = spec.params
        vals = two_tone(x, p0, sigma, hbar)
    else:
        xs, vals = read_signal_csv(spec.params[0])
        if xs.shape != x.shape or not np.allclose(xs, x, rtol=0, atol=1e-9 * grid.dx):
            raise ValueError(f"{spec.params[0]}: sample points do not match the grid")
    sig = SampledSignal(grid, vals)
    return sig.normalized() if spec.normalize else sig
