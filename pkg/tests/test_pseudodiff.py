import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bjquant.distributions import DEFAULT_RULE, theta_values
from bjquant.errors import GridMismatchError, NumericalError
from bjquant.grid import PhaseFunction, SampledSignal, make_phase_grid, sample_function
from bjquant.pseudodiff import (
    OperatorMatrix,
    apply,
    heisenberg_weyl,
    kernel_bj,
    kernel_tau,
    kernel_weyl,
    matrix_adjoint,
    op_from_twist,
    pairing_check,
    quantize,
    relative_difference,
)

from conftest import band_limited, gauss_sym, shifted_sym, sig, witness_sym

TAUS = [0.0, 0.3, 0.5, 1.0]


def spectral_derivative(psi: SampledSignal) -> np.ndarray:
    n = psi.grid.n_points
    k = 2 * np.pi * np.fft.fftfreq(n, psi.grid.dx)
    return np.fft.ifft(1j * k * np.fft.fft(psi.values))


@pytest.fixture(scope="module")
def psi(pg):
    return band_limited(pg, 101, kmax=30)


@pytest.mark.parametrize("tau", TAUS)
def test_position_symbol(pg, psi, tau):
    out = apply(kernel_tau(lambda x, p: x + 0 * p, tau, pg), psi)
    assert np.max(np.abs(out.values - pg.x * psi.values)) < 1e-8


@pytest.mark.parametrize("tau", TAUS)
def test_momentum_symbol(pg, psi, tau):
    out = apply(kernel_tau(lambda x, p: p + 0 * x, tau, pg), psi)
    ref = -1j * pg.hbar * spectral_derivative(psi)
    assert np.max(np.abs(out.values - ref)) < 1e-6 * np.max(np.abs(ref))


def test_constant_symbol_is_identity(pg, psi):
    for A in (kernel_weyl(lambda x, p: 1 + 0 * x * p, pg), kernel_tau(lambda x, p: 1 + 0 * x * p, 0.2, pg)):
        assert np.max(np.abs(apply(A, psi).values - psi.values)) < 1e-10
    assert np.max(np.abs(apply(OperatorMatrix.identity(pg), psi).values - psi.values)) < 1e-15


def test_weyl_xp_matches_symbolic(pg):
    g = sig(pg, "gaussian:0.3,0.5,1")
    out = apply(kernel_weyl(lambda x, p: x * p, pg), g)
    # X P - i hbar / 2 applied with spectral differentiation
    ref = pg.x * (-1j * spectral_derivative(g)) - 0.5j * g.values
    assert np.linalg.norm(out.values - ref) <= 1e-6 * np.linalg.norm(ref)


@pytest.mark.parametrize("sym", [gauss_sym, witness_sym])
def test_weyl_real_symbol_self_adjoint(pg, sym):
    A = kernel_weyl(sym, pg)
    assert relative_difference(A.adjoint(), A) < 1e-8


def test_bj_x2p2_ground_state_shift(pg):
    h0 = sig(pg, "hermite:0")
    a = lambda x, p: x**2 * p**2
    diff = apply(kernel_bj(a, pg), h0).values - apply(kernel_weyl(a, pg), h0).values
    val = np.sum(diff * np.conj(h0.values)) * pg.dx
    assert val == pytest.approx(-1 / 6, abs=1e-6)


def test_bj_of_momentum_symbol_is_weyl(pg):
    a = lambda x, p: np.exp(-(p**2)) + 0 * x
    assert relative_difference(kernel_bj(a, pg), kernel_weyl(a, pg)) < 1e-13


@pytest.mark.parametrize("sym", [lambda x, p: np.exp(-(x**2)) * (1 + x) + 0 * p, lambda x, p: np.cos(p) * np.exp(-(p**2) / 4) + 0 * x])
def test_single_variable_symbols_scheme_free(pg, sym):
    ref = kernel_weyl(sym, pg)
    for s in (0.0, 0.3, 1.0, "bj"):
        assert relative_difference(quantize(sym, s, pg), ref) < 1e-8


def test_sampled_and_analytic_paths_agree(pg, sampled_symbols):
    for name, sym in [("gauss", gauss_sym), ("witness", witness_sym)]:
        assert relative_difference(kernel_weyl(sampled_symbols[name], pg), kernel_weyl(sym, pg)) < 1e-12
        assert relative_difference(kernel_tau(sampled_symbols[name], 0.3, pg), kernel_tau(sym, 0.3, pg)) < 1e-12


@pytest.mark.slow
def test_bj_sampled_matches_analytic(pg, sampled_symbols):
    assert relative_difference(kernel_bj(sampled_symbols["gauss"], pg), kernel_bj(gauss_sym, pg)) < 1e-12


# -- Heisenberg-Weyl operators -----------------------------------------------------


def test_heisenberg_weyl_identity(pg):
    T = heisenberg_weyl((0.0, 0.0), 0.5, pg)
    assert np.max(np.abs(T.linear_map - np.eye(pg.n))) < 1e-12


@pytest.mark.parametrize("tau", [0.5, 0.2])
def test_heisenberg_weyl_commutation(pg, tau):
    z0, z1 = (0.7, -1.1), (-0.4, 0.9)
    psi = sig(pg, "gaussian:0,0,1")
    A = apply(heisenberg_weyl(z0, tau, pg), apply(heisenberg_weyl(z1, tau, pg), psi)).values
    B = apply(heisenberg_weyl(z1, tau, pg), apply(heisenberg_weyl(z0, tau, pg), psi)).values
    sigma = z0[1] * z1[0] - z1[1] * z0[0]
    assert np.max(np.abs(A - np.exp(1j * sigma / pg.hbar) * B)) < 1e-8


def test_heisenberg_weyl_action(pg):
    from bjquant.signals import gaussian

    psi = sig(pg, "gaussian:0,0,1")
    x0, p0 = 1.3, -0.6
    out = apply(heisenberg_weyl((x0, p0), 0.5, pg), psi).values
    ref = np.exp(1j * (p0 * pg.x - 0.5 * p0 * x0)) * gaussian(pg.x - x0)
    assert np.max(np.abs(out - ref)) < 1e-12


def test_tau_average_is_theta_scaled(pg):
    z = (1.0, 2.0)
    avg = sum(w * heisenberg_weyl(z, t, pg).entries for t, w in DEFAULT_RULE.nodes_weights())
    ref = theta_values(*z, pg.hbar) * heisenberg_weyl(z, 0.5, pg).entries
    assert np.max(np.abs(avg - ref)) <= 1e-8 * np.max(np.abs(ref))


def test_heisenberg_weyl_rejects_outside(pg):
    with pytest.raises(ValueError):
        heisenberg_weyl((50.0, 0.0), 0.5, pg)


# -- twist form ------------------------------------------------------------------------


@pytest.mark.parametrize("scheme", ["weyl", "bj"])
def test_twist_matches_kernel(pg, sampled_symbols, scheme):
    a = sampled_symbols["gauss"]
    K = quantize(a, scheme, pg)
    assert relative_difference(op_from_twist(a, pg, scheme), K, norm="op") < 1e-5


def test_twist_constant_symbol_is_identity(pg):
    one = sample_function(pg, lambda x, p: 1 + 0 * x * p)
    assert np.max(np.abs(op_from_twist(one, pg).linear_map - np.eye(pg.n))) < 1e-10


def test_twist_rejects_rough_symbol(pg):
    rough = PhaseFunction(pg, np.random.default_rng(0).normal(size=(pg.n, pg.n)))
    with pytest.raises(NumericalError):
        op_from_twist(rough, pg, "weyl")


# -- pairing ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def pairs(pg):
    g = sig(pg, "gaussian:0,0,1")
    return [
        (g, g),
        (band_limited(pg, 1, kmax=30), band_limited(pg, 2, kmax=30)),
        (sig(pg, "hermite:1"), sig(pg, "chirp:0.5")),
    ]


@pytest.mark.parametrize("scheme", [0.3, 0.5, "bj"])
@pytest.mark.parametrize("name", ["gauss", "witness", "shifted"])
def test_pairing_identities(pg, sampled_symbols, pairs, scheme, name):
    a = sampled_symbols[name]
    for psi, phi in pairs:
        lhs, rhs = pairing_check(a, psi, phi, scheme, pg)
        # some pairings vanish by parity, hence the absolute floor
        assert abs(lhs - rhs) <= 1e-6 * max(abs(lhs), 1e-8)


def test_pairing_with_callback(pg):
    psi, phi = band_limited(pg, 5, kmax=30), band_limited(pg, 6, kmax=30)
    lhs, rhs = pairing_check(shifted_sym, psi, phi, 0.5, pg)
    assert abs(lhs - rhs) <= 1e-6 * abs(lhs)


# -- adjoints --------------------------------------------------------------------------


@pytest.mark.parametrize("tau", TAUS)
@pytest.mark.parametrize("name", ["witness", "shifted"])
def test_adjoint_law(pg, sampled_symbols, tau, name):
    a = sampled_symbols[name]
    lhs = matrix_adjoint(kernel_tau(a, tau, pg))
    rhs = kernel_tau(a.conj(), 1 - tau, pg)
    assert relative_difference(lhs, rhs) <= 1e-8
    assert np.array_equal(matrix_adjoint(lhs).entries, kernel_tau(a, tau, pg).entries)


@pytest.mark.parametrize("name", ["gauss", "witness"])
def test_bj_self_adjoint(pg, sampled_symbols, name):
    A = kernel_bj(sampled_symbols[name], pg)
    assert relative_difference(matrix_adjoint(A), A) <= 1e-8


def test_bj_adjoint_of_complex_symbol(pg, sampled_symbols):
    a = sampled_symbols["shifted"]
    assert relative_difference(matrix_adjoint(kernel_bj(a, pg)), kernel_bj(a.conj(), pg)) <= 1e-8


# -- plumbing ---------------------------------------------------------------------------


def test_grid_checks(pg, psi):
    other = make_phase_grid(128, 10, 1)
    with pytest.raises(GridMismatchError):
        apply(OperatorMatrix.identity(other), psi)
    with pytest.raises(GridMismatchError):
        kernel_weyl(sample_function(other, gauss_sym), pg)
    with pytest.raises(ValueError):
        quantize(gauss_sym, "nope", pg)


def test_operator_matrix_is_immutable(pg):
    A = OperatorMatrix.identity(pg)
    with pytest.raises(ValueError):
        A.entries[0, 0] = 2
    with pytest.raises(NumericalError):
        OperatorMatrix(pg, np.full((pg.n, pg.n), np.nan))


@given(st.integers(0, 2**31 - 1), st.sampled_from([0.0, 0.3, 0.5, "bj"]))
@settings(max_examples=10, deadline=None)
def test_linearity(seed, scheme):
    pg = make_phase_grid(64, 6.0, 1.0)
    rng = np.random.default_rng(seed)
    c1, c2 = rng.normal(size=2) + 1j * rng.normal(size=2)
    X, P = pg.mesh()
    a = PhaseFunction(pg, np.exp(-(X**2 + P**2) / 2) * rng.normal())
    b = PhaseFunction(pg, np.exp(-((X - 1) ** 2 + P**2) / 2))
    lhs = quantize(a * c1 + b * c2, scheme, pg)
    rhs = quantize(a, scheme, pg) * c1 + quantize(b, scheme, pg) * c2
    assert relative_difference(lhs, rhs) < 1e-12
    psi, phi = band_limited(pg, seed, kmax=8, width=2.0), band_limited(pg, seed + 1, kmax=8, width=2.0)
    lin = apply(lhs, psi * c1 + phi)
    ref = apply(lhs, psi) * c1 + apply(lhs, phi)
    assert np.max(np.abs(lin.values - ref.values)) < 1e-10 * max(1.0, np.max(np.abs(ref.values)))
