"""Noncommutative polynomials in X and P modulo [X, P] = i*hbar.

Every ``OpPoly`` is stored in normal order (all X to the left of all P), so
two polynomials are equal exactly when their term dictionaries agree.

The product of normal monomials uses the reordering identity

    P^b X^c = sum_k  k! C(b,k) C(c,k) (-i hbar)^k  X^(c-k) P^(b-k)

while :func:`normal_order_word` reaches the same form by swapping adjacent
``PX -> XP - i hbar`` one pair at a time; it is kept as an independent check.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import comb, factorial

from .rings import I, ONE, ZERO, HbarPoly, QQi

MAX_DEGREE = 64
HBAR_SYMBOL = "ħ"


class OpPoly:
    __slots__ = ("_t",)

    def __init__(self, terms=None):
        t = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("exponents must be non-negative")
            if a + b > MAX_DEGREE:
                raise ValueError(f"degree {a + b} exceeds the cap of {MAX_DEGREE}")
            c = c if isinstance(c, HbarPoly) else HbarPoly.const(c)
            if c:
                t[(int(a), int(b))] = c
        object.__setattr__(self, "_t", t)

    def __setattr__(self, name, value):
        raise AttributeError("OpPoly is immutable")

    # constructors
    @classmethod
    def scalar(cls, c) -> "OpPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls, a: int = 1) -> "OpPoly":
        return cls({(a, 0): ONE})

    @classmethod
    def p(cls, b: int = 1) -> "OpPoly":
        return cls({(0, b): ONE})

    @classmethod
    def hbar(cls, k: int = 1) -> "OpPoly":
        return cls({(0, 0): HbarPoly.monomial(k)})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def flat_terms(self):
        """Yield ``(a, b, hbar_exp, coeff)`` in display order."""
        rows = [(a, b, k, v) for (a, b), c in self._t.items() for k, v in c.items()]
        rows.sort(key=lambda r: (-(r[0] + r[1]), -r[0], r[2]))
        return rows

    @property
    def degree(self) -> int:
        return max((a + b for a, b in self._t), default=0)

    def __bool__(self):
        return bool(self._t)

    def __eq__(self, other):
        if isinstance(other, OpPoly):
            return self._t == other._t
        try:
            return self == OpPoly.scalar(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __add__(self, other):
        other = _lift(other)
        t = dict(self._t)
        for k, v in other._t.items():
            t[k] = t.get(k, HbarPoly()) + v
        return OpPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return OpPoly({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        return multiply(self, _lift(other))

    def __rmul__(self, other):
        return multiply(_lift(other), self)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = OpPoly.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"OpPoly({format_oppoly(self)!r})"

    def __str__(self):
        return format_oppoly(self)


def _lift(v) -> OpPoly:
    if isinstance(v, OpPoly):
        return v
    return OpPoly.scalar(v)


def _reorder(b: int, c: int) -> list[tuple[int, int, HbarPoly]]:
    """Normal form of ``P^b X^c`` as ``[(x_exp, p_exp, coeff)]``."""
    out = []
    for k in range(min(b, c) + 1):
        coeff = QQi(factorial(k) * comb(b, k) * comb(c, k)) * (-I) ** k
        out.append((c - k, b - k, HbarPoly.monomial(k, coeff)))
    return out


def multiply(a: OpPoly, b: OpPoly) -> OpPoly:
    """Exact product ``a * b`` in normal order."""
    if a.degree + b.degree > MAX_DEGREE:
        raise ValueError(f"product degree exceeds the cap of {MAX_DEGREE}")
    acc: dict[tuple[int, int], HbarPoly] = {}
    for (a1, b1), c1 in a._t.items():
        for (a2, b2), c2 in b._t.items():
            c12 = c1 * c2
            for xa, pb, r in _reorder(b1, a2):
                key = (a1 + xa, pb + b2)
                acc[key] = acc.get(key, HbarPoly()) + c12 * r
    return OpPoly(acc)


def commutator(a: OpPoly, b: OpPoly) -> OpPoly:
    return multiply(a, b) - multiply(b, a)


def anticommutator(a: OpPoly, b: OpPoly) -> OpPoly:
    return multiply(a, b) + multiply(b, a)


def formal_adjoint(a: OpPoly) -> OpPoly:
    """Reverse every word and conjugate the coefficients; hbar is real."""
    out = OpPoly()
    for (xa, pb), c in a._t.items():
        # (c X^a P^b)* = conj(c) P^b X^a
        out = out + OpPoly({(xa2, pb2): c.conjugate() * r for xa2, pb2, r in _reorder(pb, xa)})
    return out


def word(letters) -> OpPoly:
    """Product of the letters of a word such as ``"PXXP"``, via :func:`multiply`."""
    out = OpPoly.scalar(1)
    for ch in letters:
        out = out * _letter(ch)
    return out


def _letter(ch: str) -> OpPoly:
    if ch == "X":
        return OpPoly.x()
    if ch == "P":
        return OpPoly.p()
    raise ValueError(f"unknown letter {ch!r}; expected 'X' or 'P'")


def normal_order_word(letters, pick=None) -> OpPoly:
    """Normal-order a word by repeated ``PX -> XP - i hbar`` rewrites.

    ``pick(positions)`` chooses which ``PX`` occurrence to rewrite next
    (default: the leftmost); any choice reaches the same normal form.
    """
    letters = "".join(letters).upper()
    for ch in letters:
        _letter(ch)
    if len(letters) > MAX_DEGREE:
        raise ValueError(f"word length exceeds the cap of {MAX_DEGREE}")
    pending: dict[str, HbarPoly] = {letters: HbarPoly.const(1)}
    done: dict[tuple[int, int], HbarPoly] = {}
    minus_i_hbar = HbarPoly.monomial(1, -I)
    while pending:
        w, c = pending.popitem()
        spots = [j for j in range(len(w) - 1) if w[j] == "P" and w[j + 1] == "X"]
        if not spots:
            key = (w.count("X"), w.count("P"))
            done[key] = done.get(key, HbarPoly()) + c
            continue
        j = pick(spots) if pick else spots[0]
        swapped = w[:j] + "XP" + w[j + 2 :]
        contracted = w[:j] + w[j + 2 :]
        pending[swapped] = pending.get(swapped, HbarPoly()) + c
        pending[contracted] = pending.get(contracted, HbarPoly()) + c * minus_i_hbar
    return OpPoly(done)


# ---------------------------------------------------------------- text form

def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def _fmt_coeff(c: QQi) -> tuple[str, str]:
    """Return (sign, magnitude text) with an empty magnitude meaning 1."""
    if c.im == 0:
        sign, mag = ("-" if c.re < 0 else "+"), _fmt_frac(abs(c.re))
        return sign, "" if mag == "1" else mag
    if c.re == 0:
        sign, mag = ("-" if c.im < 0 else "+"), _fmt_frac(abs(c.im))
        return sign, ("" if mag == "1" else mag) + "i"
    im = f"+{c.im}" if c.im > 0 else f"{c.im}"
    return "+", f"({c.re}{im}i)"


def _fmt_power(sym: str, k: int) -> str:
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"


def format_oppoly(a: OpPoly, hbar_symbol: str = HBAR_SYMBOL) -> str:
    """Normal-form text, e.g. ``X^2 P^2 - 2iħ X P - (2/3)ħ^2``."""
    pieces = []
    for xa, pb, k, c in a.flat_terms():
        sign, mag = _fmt_coeff(c)
        scalar = mag + _fmt_power(hbar_symbol, k)
        mono = " ".join(s for s in (_fmt_power("X", xa), _fmt_power("P", pb)) if s)
        body = " ".join(s for s in (scalar, mono) if s) or "1"
        pieces.append((sign, body))
    if not pieces:
        return "0"
    sign0, body0 = pieces[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|(hbar|ħ|[XPi])|([-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character {text[pos]!r} at position {pos} in {text!r}")
        out.append(m.group(m.lastindex))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := power (['*'|'/'] power)*       (juxtaposition multiplies)
    # power  := atom ['^' INT]
    # atom   := INT | 'i' | 'ħ' | 'hbar' | 'X' | 'P' | '(' expr ')'

    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'a token'}, found {tok!r}")
        self.i += 1
        return tok

    def expr(self) -> OpPoly:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        out = self.term() * sign
        while self.peek() in ("+", "-"):
            s = self.take()
            t = self.term()
            out = out + t if s == "+" else out - t
        return out

    def term(self) -> OpPoly:
        out = self.power()
        while self.peek() is not None and self.peek() not in ("+", "-", ")"):
            if self.peek() == "/":
                self.take()
                d = self.power()
                out = out * OpPoly.scalar(ONE / _constant(d))
                continue
            if self.peek() == "*":
                self.take()
            out = out * self.power()
        return out

    def power(self) -> OpPoly:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ValueError(f"exponent must be a non-negative integer, found {tok!r}")
            return base ** int(tok)
        return base

    def atom(self) -> OpPoly:
        tok = self.take()
        if tok.isdigit():
            return OpPoly.scalar(int(tok))
        if tok == "i":
            return OpPoly.scalar(I)
        if tok in ("ħ", "hbar"):
            return OpPoly.hbar()
        if tok in ("X", "P"):
            return _letter(tok)
        if tok == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ValueError(f"unexpected token {tok!r}")


def _constant(a: OpPoly) -> QQi:
    t = a.terms
    if set(t) - {(0, 0)} or any(k != 0 for k, _ in t.get((0, 0), HbarPoly()).items()):
        raise ValueError("can only divide by a nonzero numeric constant")
    c = t.get((0, 0), HbarPoly()).coeffs.get(0, ZERO)
    if not c:
        raise ZeroDivisionError("division by zero")
    return c


def parse_oppoly(text: str) -> OpPoly:
    """Inverse of :func:`format_oppoly`; words in any order are normal-ordered."""
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty expression")
    p = _Parser(tokens)
    out = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing input at token {p.peek()!r}")
    return out
