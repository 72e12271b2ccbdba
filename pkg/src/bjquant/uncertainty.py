"""Mixed states, moments and Robertson-Schrodinger checks.

Traces are finite sums over the mixture, ``Tr(rho A) = sum_j l_j (A psi_j, psi_j)``.
Squares and products of observables are dense matrix products.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .distributions import DEFAULT_RULE, QuadratureRule, bjw_filtered, wigner
from .grid import PhaseFunction, PhaseGrid, SampledSignal, _same_grid, inner_product, phase_pairing
from .pseudodiff import OperatorMatrix, Symbol, apply, kernel_weyl, quantize, sample_symbol
from .metaplectic import MetaGenerator, meta_matrix, project, pullback_symbol

GRAM_TOL = 1e-8
WEIGHT_TOL = 1e-10
HERMITIAN_TOL = 1e-8
RS_TOL = 1e-8


class MixedState:
    """``rho = sum_j weights[j] |psi_j><psi_j|`` with orthonormal ``psi_j``."""

    def __init__(self, weights, states):
        w = np.asarray(weights, dtype=float)
        states = list(states)
        if w.ndim != 1 or len(w) != len(states) or len(w) == 0:
            raise ValueError("need one weight per state and at least one state")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, expected 1")
        grid = states[0].grid
        for s in states[1:]:
            _same_grid(s.grid, grid)
        G = _gram(states)
        resid = float(np.max(np.abs(G - np.eye(len(states)))))
        if resid > GRAM_TOL:
            raise ValueError(f"states are not orthonormal (Gram residual {resid:.2e})")
        self.weights = w
        self.states = tuple(states)
        self.grid = grid

    @classmethod
    def pure(cls, psi: SampledSignal) -> "MixedState":
        return cls([1.0], [psi.normalized()])

    @classmethod
    def orthonormalized(cls, weights, signals) -> "MixedState":
        """Gram-Schmidt the signals (two passes) before building the state."""
        basis = []
        for s in signals:
            v = np.asarray(s.values, dtype=complex)
            for _ in range(2):
                for b in basis:
                    v = v - np.sum(v * np.conj(b.values)) * s.grid.dx * b.values
            norm = np.sqrt(np.sum(np.abs(v) ** 2) * s.grid.dx)
            if norm < 1e-8:
                raise ValueError("signals are linearly dependent")
            basis.append(SampledSignal(s.grid, v / norm))
        return cls(weights, basis)

    def density_matrix(self, pg: PhaseGrid) -> OperatorMatrix:
        V = np.stack([s.values for s in self.states], axis=1)
        return OperatorMatrix(pg, (V * self.weights) @ V.conj().T)

    def transformed(self, S: OperatorMatrix) -> "MixedState":
        return MixedState(self.weights, [apply(S, s) for s in self.states])


def _gram(states) -> np.ndarray:
    V = np.stack([s.values for s in states], axis=1)
    return V.conj().T @ V * states[0].grid.dx


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: OperatorMatrix
    hermitian: bool = True

    def __post_init__(self):
        if self.hermitian:
            A = self.matrix.linear_map
            scale = max(np.linalg.norm(A), 1e-300)
            if np.linalg.norm(A - A.conj().T) > HERMITIAN_TOL * scale:
                raise ValueError("matrix is not hermitian")

    @classmethod
    def of(cls, A: OperatorMatrix) -> "Observable":
        L = A.linear_map
        herm = np.linalg.norm(L - L.conj().T) <= HERMITIAN_TOL * max(np.linalg.norm(L), 1e-300)
        return cls(A, bool(herm))


def _op(A) -> OperatorMatrix:
    return A.matrix if isinstance(A, Observable) else A


def _herm(A) -> Observable:
    obs = A if isinstance(A, Observable) else Observable.of(A)
    if not obs.hermitian:
        raise ValueError("observable must be hermitian")
    return obs


@lru_cache(maxsize=8)
def position_operator(pg: PhaseGrid) -> OperatorMatrix:
    return OperatorMatrix(pg, np.diag(pg.x) / pg.dx)


@lru_cache(maxsize=8)
def momentum_operator(pg: PhaseGrid) -> OperatorMatrix:
    """``-i hbar d/dx`` as the Weyl quantization of ``p``."""
    return kernel_weyl(lambda x, p: p + 0 * x, pg)


def expectation(state: MixedState, A) -> complex:
    M = _op(A)
    return complex(sum(w * inner_product(apply(M, s), s) for w, s in zip(state.weights, state.states)))


def covariance(state: MixedState, A, B) -> complex:
    MA, MB = _op(A), _op(B)
    return expectation(state, MA @ MB) - expectation(state, MA) * expectation(state, MB)


def variance(state: MixedState, A) -> float:
    _herm(A)
    return float(covariance(state, A, A).real)


def sym_covariance(state: MixedState, A, B) -> float:
    return float((0.5 * (covariance(state, A, B) + covariance(state, B, A))).real)


@dataclass(frozen=True)
class CovarianceReport:
    var_a: float
    var_b: float
    cov: complex
    cov_sym: float
    commutator_expectation: complex
    lhs: float
    rhs: float
    satisfied: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("cov", "commutator_expectation"):
            d[k] = {"re": d[k].real, "im": d[k].imag}
        return d

    def close_to(self, other: "CovarianceReport", tol: float) -> bool:
        pairs = [
            (self.var_a, other.var_a),
            (self.var_b, other.var_b),
            (self.cov, other.cov),
            (self.cov_sym, other.cov_sym),
            (self.commutator_expectation, other.commutator_expectation),
            (self.lhs, other.lhs),
            (self.rhs, other.rhs),
        ]
        return all(abs(a - b) <= tol * max(1.0, abs(b)) for a, b in pairs)


def rs_check(state: MixedState, A, B, tol: float = RS_TOL) -> CovarianceReport:
    """Robertson-Schrodinger: ``Var A Var B >= Cov_sym^2 - <[A, B]>^2 / 4``."""
    _herm(A)
    _herm(B)
    MA, MB = _op(A), _op(B)
    va, vb = variance(state, MA), variance(state, MB)
    cov = covariance(state, MA, MB)
    cs = sym_covariance(state, MA, MB)
    comm = expectation(state, MA @ MB - MB @ MA)
    lhs = va * vb
    rhs = cs**2 - 0.25 * (comm * comm).real
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return CovarianceReport(va, vb, cov, cs, comm, lhs, rhs, bool(lhs >= rhs - tol * scale))


def covariance_matrix(state: MixedState, pg: PhaseGrid) -> np.ndarray:
    X, P = position_operator(pg), momentum_operator(pg)
    c = sym_covariance(state, X, P)
    return np.array([[variance(state, X), c], [c, variance(state, P)]])


def rs_matrix_check(sigma, hbar: float) -> tuple[float, bool]:
    """Smallest eigenvalue of ``Sigma + (i hbar / 2) J`` and whether it is >= 0."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (2, 2) or not np.allclose(sigma, sigma.T, rtol=0, atol=1e-14 * np.abs(sigma).max()):
        raise ValueError("covariance matrix must be a symmetric 2x2 array")
    Jm = np.array([[0.0, 1.0], [-1.0, 0.0]])
    lam = float(np.linalg.eigvalsh(sigma + 0.5j * hbar * Jm)[0])
    return lam, bool(lam >= -1e-10 * np.trace(sigma))


def state_symbol(
    state: MixedState, scheme: str, pg: PhaseGrid, rule: QuadratureRule = DEFAULT_RULE
) -> PhaseFunction:
    """``rho_scheme = 2 pi hbar sum_j l_j W_scheme(psi_j)`` (Wigner or Born-Jordan-Wigner)."""
    scheme = scheme.lower()
    if scheme not in ("weyl", "bj"):
        raise ValueError(f"scheme must be 'weyl' or 'bj', got {scheme!r}")
    total = np.zeros((pg.n, pg.n), dtype=complex)
    for w, s in zip(state.weights, state.states):
        W = wigner(s, pg) if scheme == "weyl" else bjw_filtered(s, s, pg)
        total += w * W.values
    return PhaseFunction(pg, 2 * np.pi * pg.hbar * total)


def phase_space_density(state: MixedState, scheme: str, pg: PhaseGrid) -> PhaseFunction:
    """``rho_scheme / (2 pi hbar)``; integrates to 1 over the phase grid."""
    return state_symbol(state, scheme, pg) * (1.0 / (2 * np.pi * pg.hbar))


def expectation_via_symbol(state: MixedState, a: Symbol, scheme: str, pg: PhaseGrid) -> float:
    """``int a(z) rho(z) dz / (2 pi hbar)`` for a real symbol ``a``."""
    val = phase_pairing(sample_symbol(a, pg), phase_space_density(state, scheme, pg))
    return float(val.real)


def conjugated_report(
    state: MixedState, A, B, S: OperatorMatrix, S_inv: OperatorMatrix | None = None
) -> CovarianceReport:
    """Report for ``(S rho S^{-1}, S A S^{-1}, S B S^{-1})``; ``S_inv`` defaults to ``S^*``."""
    Si = S.adjoint() if S_inv is None else S_inv
    return rs_check(state.transformed(S), S @ _op(A) @ Si, S @ _op(B) @ Si)


def transported_report(
    state: MixedState,
    a: Symbol,
    b: Symbol,
    scheme: str,
    g: MetaGenerator,
    pg: PhaseGrid,
    rule: QuadratureRule = DEFAULT_RULE,
) -> CovarianceReport:
    """Report for ``S psi_j`` against ``Op(a o s^{-1})`` and ``Op(b o s^{-1})``.

    Equal to the untransported report whenever the scheme is covariant
    under ``g``.
    """
    s = project(g)
    S = meta_matrix(g, pg)
    A = quantize(pullback_symbol(a, s), scheme, pg, rule)
    B = quantize(pullback_symbol(b, s), scheme, pg, rule)
    return rs_check(state.transformed(S), A, B)
