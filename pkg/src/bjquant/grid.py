"""Uniform grids, hbar-scaled Fourier transforms and phase-space pairings.

Every sampled object in the package lives on a centered grid

    x_j = (j - N/2) dx,   j = 0 .. N-1,

and its momentum dual has spacing dp = 2 pi hbar / (N dx), so that
dx * dp / (2 pi hbar) = 1/N and the centered DFT below is exactly unitary.
Functions are treated as periodic band-limited (trigonometric) interpolants
of their samples; off-grid values are obtained by Fourier interpolation.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryMassWarning, GridMismatchError

DEFAULT_HBAR = 1.0
DEFAULT_N_POINTS = 256
DEFAULT_HALF_LENGTH = 10.0

# relative edge amplitude above which a signal is considered to touch the boundary
EDGE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D grid ``x_j = x_min + j*dx``."""

    n_points: int
    x_min: float
    dx: float

    def __post_init__(self):
        if self.n_points < 4 or self.n_points % 2:
            raise ValueError(f"n_points must be even and >= 4, got {self.n_points}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")

    @classmethod
    def symmetric(cls, n_points: int, dx: float) -> "Grid1D":
        return cls(int(n_points), -(n_points // 2) * float(dx), float(dx))

    @property
    def points(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def length(self) -> float:
        """Period of the grid, ``N*dx``."""
        return self.n_points * self.dx

    @property
    def is_symmetric(self) -> bool:
        return np.isclose(self.x_min, -(self.n_points // 2) * self.dx, rtol=1e-12, atol=0.0)

    def dual(self, hbar: float) -> "Grid1D":
        """Conjugate grid for the hbar-scaled transform."""
        return Grid1D.symmetric(self.n_points, 2 * np.pi * hbar / (self.n_points * self.dx))


@dataclass(frozen=True)
class PhaseGrid:
    """Position grid, its momentum dual and the value of hbar."""

    x_grid: Grid1D
    p_grid: Grid1D
    hbar: float

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.p_grid.n_points != self.x_grid.n_points:
            raise ValueError("x and p grids must have the same number of points")
        expected = 2 * np.pi * self.hbar / (self.x_grid.n_points * self.x_grid.dx)
        if not np.isclose(self.p_grid.dx, expected, rtol=1e-12, atol=0.0):
            raise ValueError("p grid spacing must equal 2*pi*hbar/(N*dx)")

    @property
    def n(self) -> int:
        return self.x_grid.n_points

    @property
    def dx(self) -> float:
        return self.x_grid.dx

    @property
    def dp(self) -> float:
        return self.p_grid.dx

    @property
    def x(self) -> np.ndarray:
        return self.x_grid.points

    @property
    def p(self) -> np.ndarray:
        return self.p_grid.points

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(X, P)`` arrays of shape (N, N); row index is x, column index is p."""
        return np.meshgrid(self.x, self.p, indexing="ij")


@dataclass(frozen=True, eq=False)
class SampledSignal:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise ValueError(
                f"signal has shape {values.shape}, grid expects ({self.grid.n_points},)"
            )
        object.__setattr__(self, "values", values)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dx))

    def normalized(self) -> "SampledSignal":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero signal")
        return SampledSignal(self.grid, self.values / nrm)

    def __add__(self, other: "SampledSignal") -> "SampledSignal":
        _same_grid(self.grid, other.grid)
        return SampledSignal(self.grid, self.values + other.values)

    def __mul__(self, c) -> "SampledSignal":
        return SampledSignal(self.grid, c * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PhaseFunction:
    """Complex samples on the phase grid, ``values[i, k] = f(x_i, p_k)``."""

    pgrid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        n = self.pgrid.n
        if values.shape != (n, n):
            raise ValueError(f"phase function has shape {values.shape}, expected ({n}, {n})")
        object.__setattr__(self, "values", values)

    def __add__(self, other: "PhaseFunction") -> "PhaseFunction":
        _same_pgrid(self.pgrid, other.pgrid)
        return PhaseFunction(self.pgrid, self.values + other.values)

    def __sub__(self, other: "PhaseFunction") -> "PhaseFunction":
        _same_pgrid(self.pgrid, other.pgrid)
        return PhaseFunction(self.pgrid, self.values - other.values)

    def __mul__(self, c) -> "PhaseFunction":
        if isinstance(c, PhaseFunction):
            _same_pgrid(self.pgrid, c.pgrid)
            return PhaseFunction(self.pgrid, self.values * c.values)
        return PhaseFunction(self.pgrid, c * self.values)

    __rmul__ = __mul__

    def conj(self) -> "PhaseFunction":
        return PhaseFunction(self.pgrid, np.conj(self.values))


def make_phase_grid(
    n_points: int = DEFAULT_N_POINTS,
    half_length: float = DEFAULT_HALF_LENGTH,
    hbar: float = DEFAULT_HBAR,
) -> PhaseGrid:
    """Build the symmetric phase grid on ``[-half_length, half_length)``.

    Parameters
    ----------
    n_points : int
        Even number of samples, at least 4.
    half_length : float
        Half width of the position window; ``dx = 2*half_length/n_points``.
    hbar : float
        Positive Planck constant; fixes ``dp = 2*pi*hbar/(n_points*dx)``.
    """
    if int(n_points) != n_points or n_points < 4 or n_points % 2:
        raise ValueError(f"n_points must be an even integer >= 4, got {n_points}")
    if not half_length > 0:
        raise ValueError(f"half_length must be positive, got {half_length}")
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    n_points = int(n_points)
    x_grid = Grid1D.symmetric(n_points, 2.0 * half_length / n_points)
    return PhaseGrid(x_grid, x_grid.dual(hbar), float(hbar))


def _same_grid(a: Grid1D, b: Grid1D) -> None:
    if a.n_points != b.n_points or not np.isclose(a.dx, b.dx, rtol=1e-12, atol=0) or not np.isclose(
        a.x_min, b.x_min, rtol=1e-12, atol=1e-15
    ):
        raise GridMismatchError(f"grid mismatch: {a} vs {b}")


def _same_pgrid(a: PhaseGrid, b: PhaseGrid) -> None:
    _same_grid(a.x_grid, b.x_grid)
    _same_grid(a.p_grid, b.p_grid)
    if not np.isclose(a.hbar, b.hbar, rtol=1e-12, atol=0):
        raise GridMismatchError(f"hbar mismatch: {a.hbar} vs {b.hbar}")


def check_grid(sig: SampledSignal, pg: PhaseGrid) -> None:
    """Raise GridMismatchError unless ``sig`` lives on ``pg.x_grid``."""
    _same_grid(sig.grid, pg.x_grid)


def check_boundary(values: np.ndarray, what: str = "signal", tol: float = EDGE_TOLERANCE) -> float:
    """Warn when a sampled function has not decayed at the grid edge.

    Returns the edge-to-peak amplitude ratio.
    """
    values = np.asarray(values)
    peak = np.max(np.abs(values))
    if peak == 0:
        return 0.0
    if values.ndim == 1:
        edge = max(abs(values[0]), abs(values[-1]))
    else:
        edge = max(
            np.max(np.abs(values[0])),
            np.max(np.abs(values[-1])),
            np.max(np.abs(values[:, 0])),
            np.max(np.abs(values[:, -1])),
        )
    ratio = float(edge / peak)
    if ratio > tol:
        warnings.warn(
            f"{what} is not negligible at the grid edge (edge/peak = {ratio:.2e})",
            BoundaryMassWarning,
            stacklevel=3,
        )
    return ratio


# -- centered DFT helpers ---------------------------------------------------


def centered_dft(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """``sum_j exp(-2 pi i (k-N/2)(j-N/2)/N) values_j`` along ``axis``."""
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(values, axes=axis), axis=axis), axes=axis)


def centered_idft(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """``sum_k exp(+2 pi i (k-N/2)(j-N/2)/N) values_k`` along ``axis`` (no 1/N)."""
    n = values.shape[axis]
    return n * np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(values, axes=axis), axis=axis), axes=axis)


def shifted_samples(values: np.ndarray, grid: Grid1D, shifts) -> np.ndarray:
    """Rows ``f(x_j + s)`` of the band-limited interpolant, one row per shift.

    Shifts that are integer multiples of ``dx`` are served by exact index
    arithmetic (periodic), the rest by Fourier interpolation.
    """
    values = np.asarray(values, dtype=complex)
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    n = grid.n_points
    steps = shifts / grid.dx
    rounded = np.rint(steps)
    if np.all(np.abs(steps - rounded) < 1e-9):
        idx = (np.arange(n)[None, :] + rounded.astype(int)[:, None]) % n
        return values[idx]
    spectrum = np.fft.fft(np.fft.ifftshift(values))
    q = np.fft.fftfreq(n) * n
    phase = np.exp(2j * np.pi * np.outer(steps, q) / n)
    out = np.fft.ifft(spectrum[None, :] * phase, axis=1)
    return np.fft.fftshift(out, axes=1)


def interpolation_matrix(grid: Grid1D, targets) -> np.ndarray:
    """Matrix ``M`` with ``(M @ f)[t] = f(targets[t])`` for the periodic interpolant."""
    targets = np.asarray(targets, dtype=float)
    n = grid.n_points
    q = np.fft.fftfreq(n) * n
    omega = 2 * np.pi / grid.length
    left = np.exp(1j * omega * np.outer(targets, q))
    right = np.exp(-1j * omega * np.outer(q, grid.points))
    return left @ right / n


# -- transforms -------------------------------------------------------------


def hbar_fourier(sig: SampledSignal, hbar: float = DEFAULT_HBAR) -> SampledSignal:
    """Unitary transform ``(2 pi hbar)^{-1/2} int exp(-i p x / hbar) psi(x) dx``.

    The result is sampled on the momentum grid dual to ``sig.grid``.
    """
    if not sig.grid.is_symmetric:
        raise GridMismatchError("hbar_fourier needs a symmetric grid")
    check_boundary(sig.values)
    vals = centered_dft(sig.values) * sig.grid.dx / np.sqrt(2 * np.pi * hbar)
    return SampledSignal(sig.grid.dual(hbar), vals)


def inverse_hbar_fourier(sig: SampledSignal, hbar: float = DEFAULT_HBAR) -> SampledSignal:
    """Inverse of :func:`hbar_fourier`; ``sig`` is sampled on a momentum grid."""
    if not sig.grid.is_symmetric:
        raise GridMismatchError("inverse_hbar_fourier needs a symmetric grid")
    vals = centered_idft(sig.values) * sig.grid.dx / np.sqrt(2 * np.pi * hbar)
    return SampledSignal(sig.grid.dual(hbar), vals)


def symplectic_fourier(f: PhaseFunction) -> PhaseFunction:
    """Symplectic Fourier transform with ``sigma(z, z') = p x' - p' x``.

    ``a_sigma(x, p) = (2 pi hbar)^{-1} sum a(x', p') exp(-i (p x' - p' x)/hbar) dx' dp'``.
    Exactly involutive on the grid.
    """
    vals = np.asarray(f.values)
    if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
        raise ValueError("symplectic_fourier needs a square phase function")
    n = f.pgrid.n
    # x' -> p (forward, axis 0) and p' -> x (backward, axis 1), then swap roles
    tmp = centered_dft(vals, axis=0)
    tmp = centered_idft(tmp, axis=1)
    return PhaseFunction(f.pgrid, tmp.T / n)


def inner_product(f: SampledSignal, g: SampledSignal) -> complex:
    """``(f, g) = sum f conj(g) dx``, linear in the first slot."""
    _same_grid(f.grid, g.grid)
    return complex(np.sum(f.values * np.conj(g.values)) * f.grid.dx)


def phase_pairing(a: PhaseFunction, b: PhaseFunction) -> complex:
    """Bilinear pairing ``<a, b> = sum a b dx dp`` (no conjugation)."""
    _same_pgrid(a.pgrid, b.pgrid)
    return complex(np.sum(a.values * b.values) * a.pgrid.dx * a.pgrid.dp)


def sample_function(pg: PhaseGrid, func) -> PhaseFunction:
    """Sample a vectorized callback ``func(x, p)`` on the phase grid."""
    X, P = pg.mesh()
    vals = np.broadcast_to(np.asarray(func(X, P), dtype=complex), X.shape)
    return PhaseFunction(pg, vals)
