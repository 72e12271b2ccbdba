"""Quantization of polynomial symbols under the tau-family of orderings.

    Tau(t):  x^m p^n -> sum_k C(n,k) (1-t)^k t^(n-k)  P^k X^m P^(n-k)
    Weyl  :  Tau(1/2)
    BJ    :  x^m p^n -> 1/(n+1) sum_k P^k X^m P^(n-k)

The BJ rule is the average of the Tau rule over t in [0, 1]; the weights are
Beta integrals, see :func:`beta_average_coefficient`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .oppoly import OpPoly, word
from .rings import I, QQi, HbarPoly


@dataclass(frozen=True)
class QuantScheme:
    tag: str
    value: Fraction | None = None

    def __post_init__(self):
        if self.tag not in ("weyl", "bj", "tau"):
            raise ValueError(f"unknown scheme {self.tag!r}")
        if self.tag == "tau":
            if self.value is None:
                raise ValueError("Tau scheme needs a value")
            object.__setattr__(self, "value", Fraction(self.value))
        elif self.value is not None:
            raise ValueError(f"{self.tag} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> "QuantScheme":
        """Accepts ``weyl``, ``bj`` (or ``born-jordan``) and ``tau:R`` with R rational."""
        t = text.strip().lower()
        if t == "weyl":
            return WEYL
        if t in ("bj", "born-jordan", "bornjordan"):
            return BORN_JORDAN
        if t.startswith("tau:"):
            try:
                return Tau(Fraction(t[4:]))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"bad tau value in {text!r}") from exc
        raise ValueError(f"unknown scheme {text!r}; expected weyl, bj or tau:R")

    def __str__(self):
        return f"tau:{self.value}" if self.tag == "tau" else self.tag


def Tau(value) -> QuantScheme:
    return QuantScheme("tau", Fraction(value))


WEYL = QuantScheme("weyl")
BORN_JORDAN = QuantScheme("bj")


def _sandwich(m: int, n: int, k: int) -> OpPoly:
    """Normal form of ``P^k X^m P^(n-k)``."""
    return word("P" * k + "X" * m + "P" * (n - k))


def quantize_monomial(m: int, n: int, scheme: QuantScheme) -> OpPoly:
    if m < 0 or n < 0:
        raise ValueError("exponents must be non-negative")
    if scheme.tag == "bj":
        total = OpPoly()
        for k in range(n + 1):
            total = total + _sandwich(m, n, k)
        return total * OpPoly.scalar(QQi(Fraction(1, n + 1)))
    t = Fraction(1, 2) if scheme.tag == "weyl" else scheme.value
    total = OpPoly()
    for k in range(n + 1):
        w = comb(n, k) * (1 - t) ** k * t ** (n - k)
        if w:
            total = total + _sandwich(m, n, k) * OpPoly.scalar(QQi(w))
    return total


def quantize_polynomial(poly: dict, scheme: QuantScheme) -> OpPoly:
    """Linear extension: ``{(m, n): c}`` with exact (Gaussian-)rational ``c``."""
    total = OpPoly()
    for (m, n), c in poly.items():
        total = total + quantize_monomial(m, n, scheme) * OpPoly.scalar(QQi.coerce(c))
    return total


def beta_average_coefficient(k: int, n: int) -> Fraction:
    """``int_0^1 (1-t)^k t^(n-k) dt = k! (n-k)! / (n+1)!``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return Fraction(factorial(k) * factorial(n - k), factorial(n + 1))


def beta_averaged_tau_rule(m: int, n: int) -> OpPoly:
    """Tau rule with each ``(1-t)^k t^(n-k)`` replaced by its integral over [0, 1]."""
    total = OpPoly()
    for k in range(n + 1):
        w = comb(n, k) * beta_average_coefficient(k, n)
        total = total + _sandwich(m, n, k) * OpPoly.scalar(QQi(w))
    return total


def mixed_commutator(m: int, n: int) -> OpPoly:
    """``[X^m, P^n] = sum_{k>=1} k! C(m,k) C(n,k) (i hbar)^k P^(n-k) X^(m-k)``."""
    return _commutator_sum(m, n, with_factorial=True)


def printed_mixed_commutator(m: int, n: int) -> OpPoly:
    """The same sum without the ``k!`` weight.

    Kept for comparison only: it agrees with ``[X^m, P^n]`` when
    ``min(m, n) <= 1`` and is wrong beyond that, e.g. it gives a ``3 hbar^2``
    constant for ``[X^2, P^2]`` where the true value is ``2 hbar^2``.
    """
    return _commutator_sum(m, n, with_factorial=False)


def _commutator_sum(m: int, n: int, with_factorial: bool) -> OpPoly:
    total = OpPoly()
    for k in range(1, min(m, n) + 1):
        w = comb(m, k) * comb(n, k) * (factorial(k) if with_factorial else 1)
        coeff = OpPoly({(0, 0): HbarPoly.monomial(k, QQi(w) * I**k)})
        total = total + coeff * word("P" * (n - k) + "X" * (m - k))
    return total


def crehan_spectrum(N: int, lam, alpha, hbar):
    """``E_N = (N + 1/2) hbar + lam hbar (2N+1)^3 + lam hbar (2N+1)(3 alpha hbar^2 - 4)``.

    Exact when every argument is an int or Fraction; float otherwise. Note
    that the cubic term carries a single power of hbar, so the formula is the
    spectrum of :func:`crehan_hamiltonian` only at ``hbar = 1``; use
    :func:`crehan_operator_spectrum` for the hbar-consistent values.
    """
    if int(N) != N or N < 0:
        raise ValueError(f"N must be a non-negative integer, got {N}")
    N = int(N)
    exact = all(isinstance(v, (int, Fraction)) for v in (lam, alpha, hbar))
    if exact:
        lam, alpha, hbar = Fraction(lam), Fraction(alpha), Fraction(hbar)
        half = Fraction(1, 2)
    else:
        lam, alpha, hbar = float(lam), float(alpha), float(hbar)
        half = 0.5
    q = 2 * N + 1
    return (N + half) * hbar + lam * hbar * q**3 + lam * hbar * q * (3 * alpha * hbar**2 - 4)


def crehan_operator_spectrum(N: int, lam, alpha, hbar):
    """Eigenvalue of :func:`crehan_hamiltonian` on the N-th oscillator state.

    ``P^2 + X^2`` acts as ``(2N+1) hbar`` there, which gives
    ``(N + 1/2) hbar + lam hbar^3 (2N+1)^3 + lam hbar (2N+1)(3 alpha hbar^2 - 4)``.
    """
    exact = all(isinstance(v, (int, Fraction)) for v in (lam, alpha, hbar))
    conv = Fraction if exact else float
    lam, alpha, hbar = conv(lam), conv(alpha), conv(hbar)
    q = (2 * int(N) + 1) * hbar
    return q / 2 + lam * q**3 + lam * q * (3 * alpha * hbar**2 - 4)


def crehan_hamiltonian(lam, alpha) -> OpPoly:
    """``(P^2+X^2)/2 + lam (P^2+X^2)^3 + lam (3 alpha hbar^2 - 4)(P^2+X^2)``, exact coefficients."""
    lam, alpha = QQi.coerce(Fraction(lam)), QQi.coerce(Fraction(alpha))
    h2 = OpPoly.p(2) + OpPoly.x(2)
    shift = OpPoly({(0, 0): HbarPoly({2: 3 * alpha, 0: QQi(-4)})})
    return h2 * QQi(Fraction(1, 2)) + (h2**3) * lam + shift * h2 * lam
