"""Metaplectic generators, their symplectic projections and covariance meters.

Covariance is read as ``S Op(a) S^{-1} = Op(a o s^{-1})`` with ``s = project(S)``.
Under that reading ``S X S^{-1} = Op(x o s^{-1})``, which fixes

    J        -> [[0, 1], [-1, 0]]
    ML(L, m) -> [[1/L, 0], [0, L]]
    VP(P)    -> [[1, 0], [-P, 1]]       (V_P psi = exp(-i P x^2 / 2 hbar) psi)

The sign in the chirp entry follows from ``V_P P V_P^{-1} = P + P X``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import DEFAULT_RULE, QuadratureRule, theta_values
from .errors import NumericalError
from .grid import Grid1D, PhaseFunction, PhaseGrid, interpolation_matrix
from .pseudodiff import OperatorMatrix, Symbol, is_sampled, quantize
from .signals import hermite_functions

ML_RANGE = (0.25, 4.0)


@dataclass(frozen=True)
class SympMat2:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not np.isfinite(det) or abs(det - 1.0) > 1e-12:
            raise ValueError(f"not symplectic: det = {det!r}")

    @classmethod
    def from_array(cls, m, tol: float = 1e-12) -> "SympMat2":
        m = np.asarray(m, dtype=float)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > tol:
            raise ValueError(f"not symplectic: det = {det!r}")
        # absorb tiny determinant drift so the strict check passes
        m = m / np.sqrt(det)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def inverse(self) -> "SympMat2":
        return SympMat2(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "SympMat2") -> "SympMat2":
        return SympMat2.from_array(self.as_array() @ other.as_array())

    def __call__(self, x, p):
        return self.a * x + self.b * p, self.c * x + self.d * p


IDENTITY = SympMat2(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class MetaGenerator:
    tag: str
    L: float = 1.0
    m: int = 0
    P: float = 0.0

    def __post_init__(self):
        if self.tag not in ("J", "ML", "VP"):
            raise ValueError(f"unknown generator {self.tag!r}")
        if self.tag == "ML" and (self.L == 0 or not np.isfinite(self.L)):
            raise ValueError("ML needs a finite nonzero L")
        if not np.isfinite(self.P):
            raise ValueError("VP needs a finite P")

    @classmethod
    def parse(cls, text: str) -> "MetaGenerator":
        """``j``, ``ml:L`` (or ``ml:L,m``) and ``vp:P``."""
        t = text.strip().lower()
        kind, _, rest = t.partition(":")
        try:
            if kind == "j" and not rest:
                return J()
            if kind == "ml":
                parts = rest.split(",")
                return ML(float(parts[0]), int(parts[1]) if len(parts) > 1 else 0)
            if kind == "vp":
                return VP(float(rest))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"bad generator {text!r}: {exc}") from None
        raise ValueError(f"unknown generator {text!r}; expected j, ml:L or vp:P")

    def __str__(self):
        if self.tag == "J":
            return "J"
        if self.tag == "ML":
            return f"ML({self.L:g},{self.m})"
        return f"VP({self.P:g})"


def J() -> MetaGenerator:
    return MetaGenerator("J")


def ML(L: float, m: int = 0) -> MetaGenerator:
    return MetaGenerator("ML", L=float(L), m=int(m))


def VP(P: float) -> MetaGenerator:
    return MetaGenerator("VP", P=float(P))


def project(g: MetaGenerator) -> SympMat2:
    if g.tag == "J":
        return SympMat2(0.0, 1.0, -1.0, 0.0)
    if g.tag == "ML":
        return SympMat2(1.0 / g.L, 0.0, 0.0, g.L)
    return SympMat2(1.0, 0.0, -g.P, 1.0)


def meta_matrix(g: MetaGenerator, pg: PhaseGrid) -> OperatorMatrix:
    """Grid realization of a generator as an ``OperatorMatrix``."""
    x, hbar = pg.x, pg.hbar
    if g.tag == "J":
        K = np.exp(-0.25j * np.pi) * np.exp(-1j * np.outer(x, x) / hbar) / np.sqrt(2 * np.pi * hbar)
        return OperatorMatrix(pg, K)
    if g.tag == "ML":
        if not ML_RANGE[0] <= abs(g.L) <= ML_RANGE[1]:
            raise ValueError(f"|L| = {abs(g.L)} is outside the supported range {ML_RANGE}")
        targets = g.L * x
        M = interpolation_matrix(pg.x_grid, targets)
        M[_outside(pg.x_grid, targets)] = 0.0
        return OperatorMatrix(pg, (1j) ** g.m * np.sqrt(abs(g.L)) * M / pg.dx)
    return OperatorMatrix(pg, np.diag(np.exp(-0.5j * g.P * x**2 / hbar)) / pg.dx)


def _low_pass(pg: PhaseGrid, fraction: float) -> np.ndarray:
    """Projector onto grid frequencies strictly below ``fraction`` of Nyquist."""
    n = pg.n
    q = np.fft.fftfreq(n) * n
    keep = (np.abs(q) < fraction * n / 2).astype(float)
    F = np.fft.fft(np.eye(n), axis=0)
    return np.fft.ifft(keep[:, None] * F, axis=0)


def meta_inverse_matrix(g: MetaGenerator, pg: PhaseGrid) -> OperatorMatrix:
    """Grid realization of ``S^{-1}``.

    For ``J`` and ``VP`` this is the adjoint. ``ML`` with ``|L| > 1`` samples
    a compressed copy, whose adjoint zero-fills instead of interpolating, so
    the inverse is the stretch ``ML(1/L, -m)``. For ``|L| < 1`` the image of
    ``S`` only holds frequencies below ``|L|`` times Nyquist, so the inverse
    drops everything above that band before compressing; compressing
    directly would alias those frequencies back into the band.
    """
    if g.tag != "ML" or abs(g.L) == 1:
        return meta_matrix(g, pg).adjoint()
    back = meta_matrix(ML(1.0 / g.L, -g.m), pg)
    if abs(g.L) > 1:
        return back
    return OperatorMatrix.from_linear_map(pg, back.linear_map @ _low_pass(pg, abs(g.L)))


def conjugate(S: OperatorMatrix, A: OperatorMatrix, S_inv: OperatorMatrix | None = None) -> OperatorMatrix:
    """``S A S^{-1}``; ``S_inv`` defaults to the adjoint of ``S``."""
    return S @ A @ (S.adjoint() if S_inv is None else S_inv)


# -- symbol pullback -------------------------------------------------------------------


def _outside(grid: Grid1D, targets) -> np.ndarray:
    pts = grid.points
    eps = 1e-9 * grid.dx
    return (targets < pts[0] - eps) | (targets > pts[-1] + eps)


def _resample_axis(vals: np.ndarray, grid: Grid1D, targets, axis: int) -> np.ndarray:
    M = interpolation_matrix(grid, targets)
    M[_outside(grid, targets)] = 0.0
    return np.moveaxis(np.tensordot(M, vals, axes=([1], [axis])), 0, axis)


def _shift_lines(vals: np.ndarray, grid: Grid1D, shifts, axis: int) -> np.ndarray:
    """Along ``axis``, evaluate line ``i`` of ``vals`` at ``points + shifts[i]``."""
    v = np.moveaxis(vals, axis, 1)
    n = grid.n_points
    q = np.fft.fftfreq(n) * n
    spec = np.fft.fft(np.fft.ifftshift(v, axes=1), axis=1)
    steps = np.asarray(shifts, dtype=float) / grid.dx
    out = np.fft.fftshift(np.fft.ifft(spec * np.exp(2j * np.pi * np.outer(steps, q) / n), axis=1), axes=1)
    targets = grid.points[None, :] + np.asarray(shifts)[:, None]
    out[_outside(grid, targets)] = 0.0
    return np.moveaxis(out, 1, axis)


def _elementary_factors(M: np.ndarray):
    """Write ``M`` (det 1) as a product of shears, a scaling and possibly a swap."""
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    if abs(a) >= 1e-12:
        # [[1,0],[c/a,1]] [[a,0],[0,1/a]] [[1,b/a],[0,1]]
        return [("lower", c / a), ("diag", (a, 1.0 / a)), ("upper", b / a)]
    # a = 0: [[0,b],[c,d]] = [[0,b],[c,0]] [[1, d/c],[0,1]]
    return [("swap", (b, c)), ("upper", d / c)]


def _compose(vals: np.ndarray, pg: PhaseGrid, kind: str, arg) -> np.ndarray:
    """Samples of ``z -> a(E z)`` for one elementary matrix ``E``."""
    xg, pgd = pg.x_grid, pg.p_grid
    x, p = pg.x, pg.p
    if kind == "diag":
        al, be = arg
        out = vals if al == 1.0 else _resample_axis(vals, xg, al * x, axis=0)
        return out if be == 1.0 else _resample_axis(out, pgd, be * p, axis=1)
    if kind == "lower":  # a(x, g x + p)
        return vals if arg == 0 else _shift_lines(vals, pgd, arg * x, axis=1)
    if kind == "upper":  # a(x + g p, p)
        return vals if arg == 0 else _shift_lines(vals, xg, arg * p, axis=0)
    # swap: a(b p, c x); first coordinate reads the p-axis values
    b, c = arg
    out = _resample_axis(vals, xg, b * p, axis=0)  # rows now indexed by p_k
    out = _resample_axis(out, pgd, c * x, axis=1)  # columns now indexed by x_i
    return out.T


def pullback_symbol(a: Symbol, s: SympMat2) -> Symbol:
    """``a o s^{-1}``; callbacks stay exact, samples are resampled band-limitedly."""
    inv = s.inverse()
    if not is_sampled(a):
        return lambda x, p: a(*inv(x, p))
    vals = np.asarray(a.values, dtype=complex)
    # a(M z) with M = M1 M2 M3 is built as ((a o M1) o M2) o M3
    for kind, arg in _elementary_factors(inv.as_array()):
        vals = _compose(vals, a.pgrid, kind, arg)
    return PhaseFunction(a.pgrid, vals)


# -- covariance meters -----------------------------------------------------------------


def covariance_defect(
    scheme: str,
    a: Symbol,
    g: MetaGenerator,
    pg: PhaseGrid,
    rule: QuadratureRule = DEFAULT_RULE,
) -> float:
    """``||S Op(a) S^{-1} - Op(a o s^{-1})||_F / ||Op(a)||_F``."""
    A = quantize(a, scheme, pg, rule)
    norm = A.frobenius()
    if norm == 0:
        raise ValueError("symbol quantizes to the zero operator")
    S, S_inv = meta_matrix(g, pg), meta_inverse_matrix(g, pg)
    B = quantize(pullback_symbol(a, project(g)), scheme, pg, rule)
    return (conjugate(S, A, S_inv) - B).frobenius() / norm


def theta_invariance(s: SympMat2, pg: PhaseGrid) -> float:
    """``max |Theta(s^{-1} z) - Theta(z)|`` over the phase grid."""
    X, P = pg.mesh()
    xs, ps = s.inverse()(X, P)
    return float(np.max(np.abs(theta_values(xs, ps, pg.hbar) - theta_values(X, P, pg.hbar))))


def symplectic_of(
    S: OperatorMatrix, pg: PhaseGrid, S_inv: OperatorMatrix | None = None, kmax: int = 1
) -> SympMat2:
    """Recover ``s`` from ``S X S^{-1}`` and ``S P S^{-1}`` by least squares.

    Probes are oscillator eigenfunctions ``h_0 .. h_kmax``. Several probe
    widths are tried and the best-fitting one wins, since a word of
    generators may stretch or transform a probe off the grid.
    """
    from .uncertainty import momentum_operator, position_operator

    X = position_operator(pg).linear_map
    P = momentum_operator(pg).linear_map
    Sm = S.linear_map
    Si = Sm.conj().T if S_inv is None else S_inv.linear_map
    best = None
    for scale in (1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0, 2.0, 4.0, 8.0, 16.0):
        H = hermite_functions(kmax, pg.x, pg.hbar * scale).T.astype(complex)
        basis = np.stack([(X @ H).ravel(), (P @ H).ravel()], axis=1)
        rows, resid = [], 0.0
        for Op in (X, P):
            target = (Sm @ Op @ Si @ H).ravel()
            coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
            resid = max(resid, np.linalg.norm(basis @ coef - target) / np.linalg.norm(target))
            rows.append(coef)
        if best is None or resid < best[0]:
            best = (resid, np.array(rows))
    resid, inv = best
    if resid > 1e-6 or np.max(np.abs(inv.imag)) > 1e-6 * max(1.0, np.max(np.abs(inv))):
        raise NumericalError(f"conjugated quadratures do not fit real combinations of X and P ({resid:.1e})")
    # rows of inv: (x, p) o s^{-1} in terms of (x, p)
    return SympMat2.from_array(np.linalg.inv(inv.real), tol=1e-6)
