"""Dense operator matrices for tau-, Weyl and Born-Jordan quantized symbols.

A symbol is either a vectorized callback ``a(x, p)`` or a ``PhaseFunction``
sampled on the working phase grid. Matrices follow the quadrature convention
``(A psi)_i = sum_j K[i, j] psi_j dx`` so that ``K`` samples the integral
kernel ``K(x_i, x_j)``.

The tau kernel

    K_tau(x, y) = (2 pi hbar)^{-1} sum_p exp(i p (x - y)/hbar) a(tau x + (1 - tau) y, p) dp

is built diagonal by diagonal. Sampled symbols take the offset ``x - y``
modulo the period ``2L`` into ``[-L, L]``, matching the periodic
discretization of the distributions module, which keeps the pairing
identities exact. Callbacks keep the plain offset so that symbols growing in
``x`` are evaluated where they should be.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .distributions import (
    DEFAULT_RULE,
    QuadratureRule,
    bjw_filtered,
    cross_wigner_tau,
    theta_values,
)
from .errors import GridMismatchError, NumericalError
from .grid import (
    PhaseFunction,
    PhaseGrid,
    SampledSignal,
    _same_pgrid,
    check_grid,
    inner_product,
    interpolation_matrix,
    phase_pairing,
    sample_function,
    symplectic_fourier,
)

Symbol = Union[Callable, PhaseFunction]

TWIST_EDGE_LIMIT = 1e-3


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    pgrid: PhaseGrid
    entries: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.entries, dtype=complex)
        n = self.pgrid.n
        if k.shape != (n, n):
            raise ValueError(f"operator matrix must be {n}x{n}, got {k.shape}")
        if not np.all(np.isfinite(k)):
            raise NumericalError("operator matrix has non-finite entries")
        k.setflags(write=False)
        object.__setattr__(self, "entries", k)

    @classmethod
    def identity(cls, pg: PhaseGrid) -> "OperatorMatrix":
        return cls(pg, np.eye(pg.n) / pg.dx)

    @classmethod
    def from_linear_map(cls, pg: PhaseGrid, m: np.ndarray) -> "OperatorMatrix":
        """Wrap a plain matrix acting on sample vectors."""
        return cls(pg, np.asarray(m) / pg.dx)

    @property
    def linear_map(self) -> np.ndarray:
        """The matrix acting on sample vectors, ``K dx``."""
        return self.entries * self.pgrid.dx

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            _same_pgrid(self.pgrid, other.pgrid)
            return OperatorMatrix(self.pgrid, self.entries @ other.entries * self.pgrid.dx)
        if isinstance(other, SampledSignal):
            return apply(self, other)
        return NotImplemented

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _same_pgrid(self.pgrid, other.pgrid)
        return OperatorMatrix(self.pgrid, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _same_pgrid(self.pgrid, other.pgrid)
        return OperatorMatrix(self.pgrid, self.entries - other.entries)

    def __mul__(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.pgrid, self.entries * c)

    __rmul__ = __mul__

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.pgrid, self.entries.conj().T)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.linear_map))

    def opnorm(self) -> float:
        return float(np.linalg.norm(self.linear_map, 2))


def apply(A: OperatorMatrix, psi: SampledSignal) -> SampledSignal:
    check_grid(psi, A.pgrid)
    return SampledSignal(psi.grid, A.entries @ psi.values * A.pgrid.dx)


def matrix_adjoint(A: OperatorMatrix) -> OperatorMatrix:
    return A.adjoint()


def relative_difference(A: OperatorMatrix, B: OperatorMatrix, norm: str = "fro") -> float:
    """``||A - B|| / ||B||`` in the Frobenius (default) or spectral norm."""
    d = A - B
    if norm == "fro":
        return d.frobenius() / B.frobenius()
    return d.opnorm() / B.opnorm()


# -- symbols ------------------------------------------------------------------


def is_sampled(a: Symbol) -> bool:
    return isinstance(a, PhaseFunction)


def sample_symbol(a: Symbol, pg: PhaseGrid) -> PhaseFunction:
    if is_sampled(a):
        _same_pgrid(a.pgrid, pg)
        return a
    return sample_function(pg, a)


def conj_symbol(a: Symbol) -> Symbol:
    if is_sampled(a):
        return a.conj()
    return lambda x, p: np.conj(a(x, p))


def _check_symbol(a: Symbol, pg: PhaseGrid) -> None:
    if is_sampled(a):
        try:
            _same_pgrid(a.pgrid, pg)
        except GridMismatchError as exc:
            raise GridMismatchError(f"sampled symbol lives on another grid: {exc}") from None
    elif not callable(a):
        raise TypeError("symbol must be a callable a(x, p) or a PhaseFunction")


# -- kernels --------------------------------------------------------------------


def _offsets(pg: PhaseGrid):
    """Yield ``(d, rows, cols, v)`` for every diagonal ``i - j = d``.

    ``v`` is the offset folded into ``[-L, L]``; the two antipodal diagonals
    keep ``v = +L`` and ``v = -L`` so that ``v(i, j) = -v(j, i)``.
    """
    n = pg.n
    for d in range(-(n - 1), n):
        cols = np.arange(max(0, -d), min(n, n - d))
        rows = cols + d
        if d > n // 2:
            v = (d - n) * pg.dx
        elif d < -(n // 2):
            v = (d + n) * pg.dx
        else:
            v = d * pg.dx
        yield d, rows, cols, v


def _kernel_analytic(a: Callable, taus, weights, pg: PhaseGrid) -> np.ndarray:
    # Callbacks may grow in x (polynomial symbols), where a folded lag would
    # jump the evaluation point by L. Lags stay unfolded instead, and the p sum
    # runs on a twice finer grid over the same band so that its period in the
    # lag is 4L and no lag in (-2L, 2L) aliases onto another.
    n, x, hbar = pg.n, pg.x, pg.hbar
    dp = pg.dp / 2
    p = pg.p[0] + dp * np.arange(2 * n)
    K = np.empty((n, n), dtype=complex)
    scale = dp / (2 * np.pi * hbar)
    for d in range(-(n - 1), n):
        cols = np.arange(max(0, -d), min(n, n - d))
        v = d * pg.dx
        acc = np.zeros((len(cols), 2 * n), dtype=complex)
        for t, w in zip(taus, weights):
            acc += w * np.asarray(a((x[cols] + t * v)[:, None], p[None, :]))
        K[cols + d, cols] = acc @ np.exp(1j * p * v / hbar) * scale
    return K


def _kernel_sampled(a: PhaseFunction, taus, weights, pg: PhaseGrid) -> np.ndarray:
    # Band-limited interpolation of a in x reduces, per diagonal, to one row
    # of the symplectic Fourier transform a_sigma (row index = offset v).
    n, p, x, hbar = pg.n, pg.p, pg.x, pg.hbar
    a_sig = symplectic_fourier(a).values
    K = np.empty((n, n), dtype=complex)
    scale = pg.dp / (2 * np.pi * hbar)
    taus = np.asarray(taus, dtype=float)
    weights = np.asarray(weights, dtype=float)
    E = np.exp(1j * np.outer(x, p) / hbar)
    for _, rows, cols, v in _offsets(pg):
        row = (int(round(v / pg.dx)) + n // 2) % n  # index of x = v (mod 2L)
        tau_phase = np.exp(1j * np.outer(taus, p) * v / hbar).T @ weights  # (p,)
        K[rows, cols] = E[cols] @ (a_sig[row] * tau_phase) * scale
    return K


def _kernel(a: Symbol, taus, weights, pg: PhaseGrid) -> OperatorMatrix:
    _check_symbol(a, pg)
    if is_sampled(a):
        K = _kernel_sampled(a, taus, weights, pg)
    else:
        K = _kernel_analytic(a, taus, weights, pg)
    return OperatorMatrix(pg, K)


def kernel_tau(a: Symbol, tau: float, pg: PhaseGrid) -> OperatorMatrix:
    """Shubin ``tau`` quantization ``Op_tau(a)`` as a kernel matrix.

    Callbacks are evaluated exactly at ``tau x + (1 - tau) y``; sampled
    symbols are interpolated in ``x`` by their band-limited interpolant.
    """
    if not np.isfinite(tau):
        raise ValueError(f"tau must be finite, got {tau}")
    return _kernel(a, [tau], [1.0], pg)


def kernel_weyl(a: Symbol, pg: PhaseGrid) -> OperatorMatrix:
    return kernel_tau(a, 0.5, pg)


def kernel_bj(a: Symbol, pg: PhaseGrid, rule: QuadratureRule = DEFAULT_RULE) -> OperatorMatrix:
    """Born-Jordan quantization: the symbol argument averaged over ``rule``."""
    if not rule.nodes:
        raise ValueError("empty quadrature rule")
    return _kernel(a, rule.nodes, rule.weights, pg)


def quantize(a: Symbol, scheme, pg: PhaseGrid, rule: QuadratureRule = DEFAULT_RULE) -> OperatorMatrix:
    """Dispatch on ``"weyl"``, ``"bj"`` or a numeric tau."""
    if isinstance(scheme, str):
        s = scheme.lower()
        if s == "weyl":
            return kernel_weyl(a, pg)
        if s in ("bj", "born-jordan"):
            return kernel_bj(a, pg, rule)
        if s.startswith("tau:"):
            return kernel_tau(a, float(s[4:]), pg)
        raise ValueError(f"unknown scheme {scheme!r}")
    return kernel_tau(a, float(scheme), pg)


# -- Heisenberg-Weyl operators and the twist form ----------------------------------------


def heisenberg_weyl(z0, tau: float, pg: PhaseGrid) -> OperatorMatrix:
    """``(T_tau(z0) psi)(x) = exp(i (p0 x - (1 - tau) p0 x0)/hbar) psi(x - x0)``.

    Off-grid shifts use the band-limited interpolant; ``tau = 1/2`` is the
    usual Heisenberg-Weyl operator ``T(z0)``.
    """
    x0, p0 = (float(c) for c in z0)
    x, hbar = pg.x, pg.hbar
    if abs(x0) > pg.x_grid.length / 2 or not pg.p[0] <= p0 <= -pg.p[0]:
        raise ValueError(f"z0 = {z0} lies outside the phase grid")
    shift = interpolation_matrix(pg.x_grid, x - x0)
    phase = np.exp(1j * (p0 * x - (1 - tau) * p0 * x0) / hbar)
    return OperatorMatrix(pg, phase[:, None] * shift / pg.dx)


def op_from_twist(a: Symbol, pg: PhaseGrid, scheme: str = "weyl") -> OperatorMatrix:
    """``(2 pi hbar)^{-1} sum_z a_sigma(z) [Theta(z)] T(z) dx dp`` over the phase grid.

    Every grid point ``z = (x0, p0)`` contributes an exact periodic shift by
    ``x0``; Born-Jordan multiplies ``a_sigma`` by ``Theta`` first.
    """
    scheme = scheme.lower()
    if scheme not in ("weyl", "bj"):
        raise ValueError(f"scheme must be 'weyl' or 'bj', got {scheme!r}")
    a_s = symplectic_fourier(sample_symbol(a, pg)).values
    peak = np.max(np.abs(a_s))
    if peak == 0:
        return OperatorMatrix(pg, np.zeros((pg.n, pg.n)))
    edge = max(np.abs(a_s[[0, -1], :]).max(), np.abs(a_s[:, [0, -1]]).max()) / peak
    if edge > TWIST_EDGE_LIMIT:
        raise NumericalError(
            f"symplectic Fourier transform of the symbol reaches the grid edge (edge/peak = {edge:.2e})"
        )
    n, x, p, hbar = pg.n, pg.x, pg.p, pg.hbar
    if scheme == "bj":
        X, P = pg.mesh()
        a_s = a_s * theta_values(X, P, hbar)
    # column m of C holds a_sigma(x_m, .) with the midpoint phase exp(-i p x_m / 2 hbar)
    C = (a_s * np.exp(-0.5j * np.outer(x, p) / hbar)).T
    B = np.exp(1j * np.outer(x, p) / hbar) @ C * pg.dp / (2 * np.pi * hbar)  # B[i, m]
    K = np.zeros((n, n), dtype=complex)
    rows = np.arange(n)
    for m in range(n):
        d0 = m - n // 2  # x_m = d0 dx
        K[rows, (rows - d0) % n] += B[:, m]
    return OperatorMatrix(pg, K)


# -- pairing ------------------------------------------------------------------------


def pairing_check(
    a: Symbol,
    psi: SampledSignal,
    phi: SampledSignal,
    tau,
    pg: PhaseGrid,
    rule: QuadratureRule = DEFAULT_RULE,
) -> tuple[complex, complex]:
    """Both sides of ``(Op(a) psi, phi) = <a, W(psi, phi)>``.

    ``tau`` is a number for the Shubin family or ``"bj"`` for Born-Jordan, in
    which case the distribution is the Born-Jordan-Wigner one.
    """
    a_s = sample_symbol(a, pg)
    if isinstance(tau, str):
        if tau.lower() not in ("bj", "born-jordan"):
            raise ValueError(f"unknown scheme {tau!r}")
        A = kernel_bj(a, pg, rule)
        W = bjw_filtered(psi, phi, pg)
    else:
        A = kernel_tau(a, float(tau), pg)
        W = cross_wigner_tau(psi, phi, float(tau), pg)
    lhs = inner_product(apply(A, psi), phi)
    rhs = phase_pairing(a_s, W)
    return lhs, rhs
