import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bjquant.grid import SampledSignal, make_phase_grid, phase_pairing, sample_function
from bjquant.metaplectic import J, ML, meta_matrix
from bjquant.pseudodiff import OperatorMatrix, kernel_weyl, quantize
from bjquant.uncertainty import (
    CovarianceReport,
    MixedState,
    Observable,
    conjugated_report,
    covariance,
    covariance_matrix,
    expectation,
    expectation_via_symbol,
    momentum_operator,
    phase_space_density,
    position_operator,
    rs_check,
    rs_matrix_check,
    state_symbol,
    sym_covariance,
    transported_report,
    variance,
)

from conftest import band_limited, gauss_sym, sig, witness_sym


@pytest.fixture(scope="module")
def ops(pg):
    return position_operator(pg), momentum_operator(pg)


@pytest.fixture(scope="module")
def ground(pg):
    return MixedState.pure(sig(pg, "hermite:0"))


def squeezed(pg):
    return SampledSignal(pg.x_grid, np.exp(-(1 + 1j) * pg.x**2 / 2)).normalized()


def random_mixture(pg, seed, k=3):
    rng = np.random.default_rng(seed)
    signals = [band_limited(pg, seed * 10 + j, kmax=20) for j in range(k)]
    return MixedState.orthonormalized(rng.dirichlet(np.ones(k)), signals)


# -- moments -----------------------------------------------------------------------------


def test_position_mean_vanishes(ops, ground):
    assert abs(expectation(ground, ops[0])) < 1e-10


@pytest.mark.parametrize("k", range(4))
def test_oscillator_energies(pg, ops, k):
    X, P = ops
    H = (X @ X + P @ P) * 0.5
    assert expectation(MixedState.pure(sig(pg, f"hermite:{k}")), H) == pytest.approx(k + 0.5, abs=1e-6)


def test_mixture_energy(pg, ops):
    X, P = ops
    H = (X @ X + P @ P) * 0.5
    state = MixedState([0.5, 0.5], [sig(pg, "hermite:0"), sig(pg, "hermite:1")])
    assert expectation(state, H) == pytest.approx(1.0, abs=1e-6)


def test_variances(pg, ops, ground):
    X, _ = ops
    assert variance(ground, X) == pytest.approx(0.5, abs=1e-6)
    assert variance(MixedState.pure(sig(pg, "hermite:1")), X) == pytest.approx(1.5, abs=1e-6)
    assert abs(variance(ground, OperatorMatrix.identity(pg))) < 1e-10


def test_position_momentum_covariance(ops, ground):
    X, P = ops
    assert abs(sym_covariance(ground, X, P)) < 1e-8
    assert covariance(ground, X, P).imag == pytest.approx(0.5, abs=1e-6)
    assert covariance(ground, X, X) == pytest.approx(variance(ground, X), abs=1e-12)


def test_covariance_conjugate_symmetry(pg, ops):
    state = random_mixture(pg, 4)
    X, P = ops
    assert abs(np.conj(covariance(state, X, P)) - covariance(state, P, X)) < 1e-8


def test_squeezed_gaussian_moments(pg, ops):
    # psi ~ exp(-(1 + i) x^2 / 2): <x^2> = 1/2, P psi = (i - 1) x psi
    state = MixedState.pure(squeezed(pg))
    X, P = ops
    assert variance(state, X) == pytest.approx(0.5, abs=1e-6)
    assert variance(state, P) == pytest.approx(1.0, abs=1e-6)
    assert sym_covariance(state, X, P) == pytest.approx(-0.5, abs=1e-6)
    sigma = covariance_matrix(state, pg)
    assert np.linalg.det(sigma) == pytest.approx(0.25, abs=1e-6)


# -- Robertson-Schrodinger ------------------------------------------------------------


def test_gaussian_saturates(ops, ground):
    r = rs_check(ground, *ops)
    assert r.satisfied
    assert r.lhs == pytest.approx(0.25, abs=1e-6)
    assert r.rhs == pytest.approx(0.25, abs=1e-6)


def test_h1_strict(pg, ops):
    r = rs_check(MixedState.pure(sig(pg, "hermite:1")), *ops)
    assert r.satisfied
    assert r.lhs == pytest.approx(9 / 4, abs=1e-6)
    assert r.rhs == pytest.approx(1 / 4, abs=1e-6)


def test_position_and_its_square(ops, ground):
    X, _ = ops
    r = rs_check(ground, X, X @ X)
    assert r.satisfied
    assert abs(r.commutator_expectation) < 1e-10


@pytest.mark.parametrize("seed", range(20))
def test_random_mixtures(pg, ops, seed):
    state = random_mixture(pg, seed + 100)
    assert rs_check(state, *ops).satisfied
    lam, ok = rs_matrix_check(covariance_matrix(state, pg), pg.hbar)
    assert ok and lam >= -1e-10


def test_suite_states(pg, ops):
    suite = [
        MixedState.pure(sig(pg, "gaussian:1,-0.5,1")),
        MixedState.pure(squeezed(pg)),
        MixedState([0.2, 0.3, 0.5], [sig(pg, f"hermite:{k}") for k in range(3)]),
    ]
    for state in suite:
        assert rs_check(state, *ops).satisfied
        sigma = covariance_matrix(state, pg)
        assert np.array_equal(sigma, sigma.T)
        assert rs_matrix_check(sigma, pg.hbar)[1]


def test_covariance_matrix_examples(pg):
    s0 = covariance_matrix(MixedState.pure(sig(pg, "hermite:0")), pg)
    s1 = covariance_matrix(MixedState.pure(sig(pg, "hermite:1")), pg)
    assert np.max(np.abs(s0 - np.diag([0.5, 0.5]))) < 1e-6
    assert np.max(np.abs(s1 - np.diag([1.5, 1.5]))) < 1e-6


@pytest.mark.parametrize("hbar", [1.0, 0.5])
def test_rs_matrix_examples(hbar):
    lam, ok = rs_matrix_check(np.diag([hbar / 2, hbar / 2]), hbar)
    assert lam == pytest.approx(0, abs=1e-14) and ok
    lam, ok = rs_matrix_check(np.diag([hbar, hbar]), hbar)
    assert lam == pytest.approx(hbar / 2, abs=1e-14) and ok
    lam, ok = rs_matrix_check(np.diag([hbar / 4, hbar / 4]), hbar)
    assert lam == pytest.approx(-hbar / 4, abs=1e-14) and not ok


@given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(-3, 3))
def test_rs_matrix_matches_determinant(a, b, c):
    # for 2x2 real symmetric sigma the test is det(sigma) >= hbar^2 / 4 with a > 0
    sigma = np.array([[a, c], [c, b]])
    lam, ok = rs_matrix_check(sigma, 1.0)
    det = a * b - c * c
    if abs(det - 0.25) > 1e-6:
        assert ok == (det >= 0.25)


def test_commutator_expectation_imaginary(pg):
    A = kernel_weyl(sample_function(pg, gauss_sym), pg)
    B = kernel_weyl(sample_function(pg, witness_sym), pg)
    X = position_operator(pg)
    for seed in range(3):
        state = random_mixture(pg, seed)
        for M, N in ((A, B), (X, B), (X, momentum_operator(pg))):
            c = expectation(state, M @ N - N @ M)
            if abs(c) > 1e-6:
                assert abs(c.real) <= 1e-8 * abs(c.imag)


# -- phase space symbols -------------------------------------------------------------------


@pytest.mark.parametrize("scheme", ["weyl", "bj"])
def test_state_symbol_normalized(pg, ground, scheme):
    rho = state_symbol(ground, scheme, pg)
    assert np.max(np.abs(rho.values.imag)) < 1e-10
    assert phase_space_density(ground, scheme, pg).values.sum().real * pg.dx * pg.dp == pytest.approx(1, abs=1e-10)


def test_h1_symbol_negative(pg):
    rho = state_symbol(MixedState.pure(sig(pg, "hermite:1")), "weyl", pg).values.real
    assert rho.min() < 0
    assert rho[128, 128] == pytest.approx(-2.0, abs=1e-9)


def test_state_symbol_linear(pg):
    h0, h1 = sig(pg, "hermite:0"), sig(pg, "hermite:1")
    mix = state_symbol(MixedState([0.3, 0.7], [h0, h1]), "bj", pg).values
    parts = 0.3 * state_symbol(MixedState.pure(h0), "bj", pg).values + 0.7 * state_symbol(MixedState.pure(h1), "bj", pg).values
    assert np.max(np.abs(mix - parts)) < 1e-14


def test_symbol_path_examples(pg, ground):
    shifted = MixedState.pure(sig(pg, "gaussian:1,0,1"))
    x = lambda x, p: x + 0 * p
    assert expectation_via_symbol(shifted, x, "weyl", pg) == pytest.approx(1, abs=1e-6)
    assert expectation(shifted, position_operator(pg)) == pytest.approx(1, abs=1e-6)
    r2 = lambda x, p: x**2 + p**2
    assert expectation_via_symbol(ground, r2, "weyl", pg) == pytest.approx(1, abs=1e-6)
    assert expectation(ground, quantize(r2, "weyl", pg)) == pytest.approx(1, abs=1e-6)
    for scheme in ("weyl", "bj"):
        assert expectation_via_symbol(ground, lambda x, p: 1 + 0 * x * p, scheme, pg) == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("scheme", ["weyl", "bj"])
@pytest.mark.parametrize("name", ["gauss", "witness", "bump"])
def test_symbol_and_operator_paths(pg, sampled_symbols, scheme, name):
    if name == "bump":
        a = sample_function(pg, lambda x, p: np.exp(-((x - 1) ** 2 + (p + 0.5) ** 2) / 2) * (1 + 0.5 * x))
    else:
        a = sampled_symbols[name]
    for state in (MixedState.pure(sig(pg, "gaussian:0.5,-0.3,1")), random_mixture(pg, 7)):
        via_symbol = expectation_via_symbol(state, a, scheme, pg)
        via_operator = expectation(state, quantize(a, scheme, pg))
        assert abs(via_operator.imag) < 1e-10
        assert via_symbol == pytest.approx(via_operator.real, rel=1e-6, abs=1e-12)


def test_bj_symbol_pairs_with_bj_operator(pg, sampled_symbols):
    # the Born-Jordan symbol of the state is the right density for BJ operators only
    state = MixedState.pure(sig(pg, "hermite:2"))
    a = sampled_symbols["witness"] * sampled_symbols["witness"]
    bj = expectation(state, quantize(a, "bj", pg)).real
    weyl = expectation(state, quantize(a, "weyl", pg)).real
    dens = phase_space_density(state, "bj", pg)
    assert phase_pairing(a, dens).real == pytest.approx(bj, rel=1e-6)
    assert abs(bj - weyl) > 1e-4


# -- transport ---------------------------------------------------------------------------------


def test_conjugation_preserves_report(pg, ops):
    state = random_mixture(pg, 11)
    S = meta_matrix(J(), pg)
    before = rs_check(state, *ops)
    assert conjugated_report(state, *ops, S).close_to(before, 1e-6)


@pytest.mark.parametrize("scheme,g", [("weyl", J()), ("bj", J()), ("bj", ML(2)), ("weyl", ML(2))], ids=str)
def test_transported_report(pg, sampled_symbols, scheme, g):
    a, b = sampled_symbols["gauss"], sampled_symbols["witness"]
    state = MixedState.pure(sig(pg, "gaussian:0.4,0.2,1"))
    before = rs_check(state, quantize(a, scheme, pg), quantize(b, scheme, pg))
    after = transported_report(state, a, b, scheme, g, pg)
    assert after.close_to(before, 1e-6)


def test_report_serialization(ops, ground):
    d = rs_check(ground, *ops).to_dict()
    assert set(d) == {"var_a", "var_b", "cov", "cov_sym", "commutator_expectation", "lhs", "rhs", "satisfied"}
    assert set(d["cov"]) == {"re", "im"}
    assert isinstance(rs_check(ground, *ops), CovarianceReport)


# -- validation -----------------------------------------------------------------------------


@pytest.mark.parametrize("weights", [[0.5, 0.4], [1.2, -0.2], [], [1.0]])
def test_mixture_weight_validation(pg, weights):
    with pytest.raises(ValueError):
        MixedState(weights, [sig(pg, "hermite:0"), sig(pg, "hermite:1")])


def test_mixture_orthonormality(pg):
    h0 = sig(pg, "hermite:0")
    with pytest.raises(ValueError):
        MixedState([0.5, 0.5], [h0, sig(pg, "gaussian:0.5,0,1")])
    with pytest.raises(ValueError):
        MixedState.orthonormalized([0.5, 0.5], [h0, h0 * 2])
    state = MixedState.orthonormalized([0.5, 0.5], [h0, sig(pg, "gaussian:0.5,0,1")])
    assert abs(np.vdot(state.states[0].values, state.states[1].values) * pg.dx) < 1e-12


def test_grid_mismatch(pg):
    other = make_phase_grid(128, 10, 1)
    with pytest.raises(Exception):
        MixedState([0.5, 0.5], [sig(pg, "hermite:0"), sig(other, "hermite:1")])


def test_hermiticity_required(pg, ground):
    N = OperatorMatrix.from_linear_map(pg, np.triu(np.ones((pg.n, pg.n))))
    with pytest.raises(ValueError):
        Observable(N)
    assert not Observable.of(N).hermitian
    with pytest.raises(ValueError):
        variance(ground, N)
    with pytest.raises(ValueError):
        rs_check(ground, N, position_operator(pg))


def test_rs_matrix_rejects_asymmetric():
    with pytest.raises(ValueError):
        rs_matrix_check(np.array([[1.0, 0.2], [0.1, 1.0]]), 1.0)
    with pytest.raises(ValueError):
        rs_matrix_check(np.eye(3), 1.0)


def test_state_symbol_scheme(pg, ground):
    with pytest.raises(ValueError):
        state_symbol(ground, "tau", pg)
