"""Exact scalar rings: Gaussian rationals and polynomials in hbar over them."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"exact rational expected, got {type(v).__name__}")


class QQi:
    """Gaussian rational ``re + i*im`` with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("QQi is immutable")

    @classmethod
    def coerce(cls, v) -> "QQi":
        if isinstance(v, QQi):
            return v
        if isinstance(v, complex):
            raise TypeError("floating complex values are not exact; pass QQi or Fractions")
        return cls(v)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = QQi.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = QQi.coerce(other)
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QQi.coerce(other))

    def __rsub__(self, other):
        return QQi.coerce(other) - self

    def __mul__(self, other):
        other = QQi.coerce(other)
        return QQi(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QQi.coerce(other)
        d = other.re**2 + other.im**2
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * QQi(other.re / d, -other.im / d)

    def __pow__(self, k: int):
        if k < 0:
            return QQi(1) / self**-k
        out, base = QQi(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "QQi":
        return QQi(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


I = QQi(0, 1)
ONE = QQi(1)
ZERO = QQi(0)


class HbarPoly:
    """Polynomial in hbar with Gaussian-rational coefficients, ``{exponent: QQi}``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        for k, v in (coeffs or {}).items():
            if int(k) != k or k < 0:
                raise ValueError(f"hbar exponent must be a non-negative integer, got {k}")
            v = QQi.coerce(v)
            if v:
                c[int(k)] = v
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("HbarPoly is immutable")

    @classmethod
    def const(cls, v) -> "HbarPoly":
        return cls({0: v})

    @classmethod
    def monomial(cls, k: int, v=1) -> "HbarPoly":
        return cls({k: v})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, HbarPoly):
            return self._c == other._c
        try:
            return self == HbarPoly.const(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other):
        other = other if isinstance(other, HbarPoly) else HbarPoly.const(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, ZERO) + v
        return HbarPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return HbarPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = other if isinstance(other, HbarPoly) else HbarPoly.const(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HbarPoly):
            other = HbarPoly.const(other)
        c: dict[int, QQi] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                c[k1 + k2] = c.get(k1 + k2, ZERO) + v1 * v2
        return HbarPoly(c)

    __rmul__ = __mul__

    def conjugate(self) -> "HbarPoly":
        # hbar is real
        return HbarPoly({k: v.conjugate() for k, v in self._c.items()})

    def evaluate(self, hbar):
        """Value at a given hbar; exact for Fraction input, complex for floats."""
        if isinstance(hbar, (int, Fraction)):
            total = ZERO
            for k, v in self._c.items():
                total = total + v * QQi(Fraction(hbar) ** k)
            return total
        return sum((complex(v) * hbar**k for k, v in self._c.items()), 0j)

    def __repr__(self):
        return f"HbarPoly({self._c!r})"
