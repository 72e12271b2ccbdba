import numpy as np
import pytest

from bjquant.grid import SampledSignal, make_phase_grid, sample_function
from bjquant.signals import generate_signal


@pytest.fixture(scope="session")
def pg():
    return make_phase_grid(256, 10.0, 1.0)


@pytest.fixture(scope="session")
def pg64():
    """Coarse grid for property tests that build many matrices."""
    return make_phase_grid(64, 6.0, 1.0)


def band_limited(pg, seed, kmax=40, width=4.0):
    """Random signal with Fourier modes |k| < kmax under a Gaussian window.

    Keeping the spectrum well inside the Nyquist band makes the discrete
    pairing identities exact up to rounding.
    """
    rng = np.random.default_rng(seed)
    n = pg.n
    coeffs = np.zeros(n, dtype=complex)
    k = np.fft.fftfreq(n, 1.0 / n)
    keep = np.abs(k) < kmax
    coeffs[keep] = rng.normal(size=keep.sum()) + 1j * rng.normal(size=keep.sum())
    coeffs[keep] *= np.exp(-(k[keep] / (kmax / 2)) ** 2)
    vals = np.fft.ifft(coeffs) * np.exp(-pg.x**2 / width)
    return SampledSignal(pg.x_grid, vals).normalized()


def sig(pg, spec):
    return generate_signal(spec, pg.x_grid, pg.hbar)


@pytest.fixture(scope="session")
def signals(pg):
    return {
        "gaussian": sig(pg, "gaussian:0,0,1"),
        "h1": sig(pg, "hermite:1"),
        "chirp": sig(pg, "chirp:0.5"),
        "two_tone": sig(pg, "two_tone:3,1"),
    }


def gauss_sym(x, p):
    return np.exp(-(x**2 + p**2) / 2)


def witness_sym(x, p):
    return x * p * np.exp(-(x**2 + p**2) / 2)


def shifted_sym(x, p):
    return np.exp(-((x - 1) ** 2 + (p + 0.5) ** 2) / 2) * (1 + 0.5j * x)


@pytest.fixture(scope="session")
def sampled_symbols(pg):
    return {
        "gauss": sample_function(pg, gauss_sym),
        "witness": sample_function(pg, witness_sym),
        "shifted": sample_function(pg, shifted_sym),
    }


ACCEPTANCE_LINES = []


def record(number, ok, detail=""):
    """Print and keep one PASS/FAIL line for an acceptance criterion."""
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
