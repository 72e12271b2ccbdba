"""Quadratic phase-space distributions: tau-Wigner, Rihaczek, ambiguity, Born-Jordan.

Conventions (hbar-scaled, one degree of freedom)::

    Wig_tau(psi, phi)(x, p) = (2 pi hbar)^-1 int exp(-i p y/hbar) psi(x + tau y) conj(phi)(x - (1-tau) y) dy
    Amb(psi, phi)(x, p)     = (2 pi hbar)^-1 int exp(-i p u/hbar) psi(u + x/2) conj(phi)(u - x/2) du
    Wig_BJ = int_0^1 Wig_tau dtau = F_sigma(Theta * Amb),   Theta(x, p) = sin(px/2hbar)/(px/2hbar)

The lag integral runs over one period ``[-L, L]`` with the two end samples
weighted by 1/2, which keeps conj(Wig_tau(phi, psi)) = Wig_{1-tau}(psi, phi)
exact on the grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    PhaseFunction,
    PhaseGrid,
    SampledSignal,
    centered_dft,
    check_boundary,
    check_grid,
    hbar_fourier,
    shifted_samples,
    symplectic_fourier,
)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for averages over ``tau`` in [0, 1]."""

    nodes: tuple
    weights: tuple

    def __post_init__(self):
        nodes = tuple(float(t) for t in self.nodes)
        weights = tuple(float(w) for w in self.weights)
        if not nodes:
            raise ValueError("quadrature rule is empty")
        if len(nodes) != len(weights):
            raise ValueError("nodes and weights differ in length")
        if any(not 0.0 < t < 1.0 for t in nodes):
            raise ValueError("nodes must lie strictly inside (0, 1)")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {sum(weights)!r}, expected 1")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def gauss_legendre(cls, n: int = 32) -> "QuadratureRule":
        t, w = np.polynomial.legendre.leggauss(int(n))
        return cls(tuple((t + 1) / 2), tuple(w / 2))

    @property
    def is_symmetric(self) -> bool:
        """True when the rule is invariant under ``tau -> 1 - tau``."""
        pairs = sorted(zip(self.nodes, self.weights))
        mirror = sorted((1 - t, w) for t, w in self.nodes_weights())
        return all(
            abs(a[0] - b[0]) < 1e-14 and abs(a[1] - b[1]) < 1e-14 for a, b in zip(pairs, mirror)
        )

    def nodes_weights(self):
        return zip(self.nodes, self.weights)


DEFAULT_RULE = QuadratureRule.gauss_legendre(32)


@dataclass(frozen=True)
class InterferenceRegion:
    x_range: tuple[float, float]
    p_range: tuple[float, float]

    def __post_init__(self):
        for name, (lo, hi) in (("x_range", self.x_range), ("p_range", self.p_range)):
            if not lo < hi:
                raise ValueError(f"{name} must satisfy lo < hi, got {(lo, hi)}")

    def mask(self, pg: PhaseGrid) -> np.ndarray:
        x, p = pg.x, pg.p
        for (lo, hi), pts, name in ((self.x_range, x, "x"), (self.p_range, p, "p")):
            if lo < pts[0] - 1e-12 or hi > pts[-1] + 1e-12:
                raise ValueError(f"{name} range {(lo, hi)} leaves the grid [{pts[0]}, {pts[-1]}]")
        mx = (x >= self.x_range[0]) & (x <= self.x_range[1])
        mp = (p >= self.p_range[0]) & (p <= self.p_range[1])
        m = np.outer(mx, mp)
        if not m.any():
            raise ValueError("interference region contains no grid points")
        return m


def _lag_products(psi, phi, pg: PhaseGrid, a: float, b: float) -> np.ndarray:
    """``f[m, j] = psi(x_j + a*y_m) conj(phi)(x_j - b*y_m)`` with folded end lags.

    ``y_m`` runs over the x-grid offsets ``-L .. L - dx``; row 0 holds the
    average of the ``y = -L`` and ``y = +L`` products.
    """
    n = pg.n
    lags = np.concatenate([pg.x, [pg.x_grid.length / 2]])
    ps = shifted_samples(psi.values, pg.x_grid, a * lags)
    fs = shifted_samples(phi.values, pg.x_grid, -b * lags)
    prod = ps * np.conj(fs)
    prod[0] = 0.5 * (prod[0] + prod[n])
    return prod[:n]


def _check_pair(psi: SampledSignal, phi: SampledSignal, pg: PhaseGrid) -> None:
    check_grid(psi, pg)
    check_grid(phi, pg)
    check_boundary(psi.values)
    check_boundary(phi.values)


def cross_wigner_tau(psi: SampledSignal, phi: SampledSignal, tau: float, pg: PhaseGrid) -> PhaseFunction:
    """Shubin tau-Wigner cross distribution ``Wig_tau(psi, phi)`` on the phase grid.

    Parameters
    ----------
    psi, phi : SampledSignal
        Signals on ``pg.x_grid``; both should vanish near the grid edge.
    tau : float
        Any finite real; 1/2 gives the Wigner transform, 0 the Rihaczek form.
    pg : PhaseGrid

    Returns
    -------
    PhaseFunction
        ``values[i, k] = Wig_tau(psi, phi)(x_i, p_k)``.
    """
    if not np.isfinite(tau):
        raise ValueError(f"tau must be finite, got {tau}")
    _check_pair(psi, phi, pg)
    prod = _lag_products(psi, phi, pg, tau, 1.0 - tau)
    # sum over lags y_m -> momentum p_k; prod is indexed [lag, x]
    vals = centered_dft(prod, axis=0).T * pg.dx / (2 * np.pi * pg.hbar)
    return PhaseFunction(pg, vals)


def cross_wigner(psi: SampledSignal, phi: SampledSignal, pg: PhaseGrid) -> PhaseFunction:
    return cross_wigner_tau(psi, phi, 0.5, pg)


def wigner(psi: SampledSignal, pg: PhaseGrid) -> PhaseFunction:
    return cross_wigner_tau(psi, psi, 0.5, pg)


def rihaczek(psi: SampledSignal, phi: SampledSignal, pg: PhaseGrid) -> PhaseFunction:
    """``(2 pi hbar)^{-1/2} exp(-i p x/hbar) psi(x) conj(F phi)(p)``; equals ``Wig_0(psi, phi)``."""
    _check_pair(psi, phi, pg)
    X, P = pg.mesh()
    fphi = hbar_fourier(phi, pg.hbar).values
    vals = np.exp(-1j * X * P / pg.hbar) * np.outer(psi.values, np.conj(fphi))
    return PhaseFunction(pg, vals / np.sqrt(2 * np.pi * pg.hbar))


def ambiguity(psi: SampledSignal, phi: SampledSignal, pg: PhaseGrid) -> PhaseFunction:
    """Cross-ambiguity function; ``values[i, k]`` is the lag ``x_i``, frequency ``p_k`` entry."""
    _check_pair(psi, phi, pg)
    prod = _lag_products(psi, phi, pg, 0.5, 0.5)  # [lag, u]
    vals = centered_dft(prod, axis=1) * pg.dx / (2 * np.pi * pg.hbar)
    return PhaseFunction(pg, vals)


def theta_filter(pg: PhaseGrid) -> PhaseFunction:
    """``Theta(x, p) = sin(px/2hbar) / (px/2hbar)``, equal to 1 on the axes."""
    X, P = pg.mesh()
    return PhaseFunction(pg, theta_values(X, P, pg.hbar))


def theta_values(x, p, hbar: float):
    # np.sinc(t) = sin(pi t)/(pi t) with the removable point handled
    return np.sinc(np.asarray(x) * np.asarray(p) / (2 * np.pi * hbar))


def bjw_filtered(psi: SampledSignal, phi: SampledSignal, pg: PhaseGrid) -> PhaseFunction:
    """Born-Jordan-Wigner distribution via the sinc filter on the ambiguity plane."""
    amb = ambiguity(psi, phi, pg)
    return symplectic_fourier(amb * theta_filter(pg))


def bjw_quadrature(
    psi: SampledSignal, phi: SampledSignal, pg: PhaseGrid, rule: QuadratureRule = DEFAULT_RULE
) -> PhaseFunction:
    """Born-Jordan-Wigner distribution as a weighted sum of tau-Wigner distributions."""
    total = np.zeros((pg.n, pg.n), dtype=complex)
    for tau, w in rule.nodes_weights():
        total += w * cross_wigner_tau(psi, phi, tau, pg).values
    return PhaseFunction(pg, total)


def born_jordan_wigner(psi: SampledSignal, pg: PhaseGrid) -> PhaseFunction:
    return bjw_filtered(psi, psi, pg)


def marginals(f: PhaseFunction) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(int f dp, int f dx)`` as arrays over x and p respectively."""
    pg = f.pgrid
    return f.values.sum(axis=1) * pg.dp, f.values.sum(axis=0) * pg.dx


def interference_energy(f: PhaseFunction, region: InterferenceRegion) -> float:
    """``int_region |f|^2 dz``."""
    pg = f.pgrid
    m = region.mask(pg)
    return float(np.sum(np.abs(f.values[m]) ** 2) * pg.dx * pg.dp)


# default ghost-frequency experiment: tones at +-3, midband box around the origin
GHOST_P0 = 3.0
GHOST_REGION = InterferenceRegion((-3.0, 3.0), (-0.5, 0.5))
