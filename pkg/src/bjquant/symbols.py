"""Named test symbols, parsed from short text specs.

    x, p             coordinate functions
    oscillator       (x^2 + p^2) / 2
    mono:M,N         x^M p^N
    gauss[:s]        exp(-(x^2 + p^2) / (2 s^2)), s defaults to sqrt(hbar)
    witness          x p exp(-(x^2 + p^2) / (2 hbar))
    shifted:x0,p0    Gaussian bump centered at (x0, p0)

Callbacks broadcast over numpy arrays and take ``hbar`` through closure.
"""
from __future__ import annotations

import numpy as np

SYMBOL_KINDS = ("x", "p", "oscillator", "mono", "gauss", "witness", "shifted")


def witness_symbol(hbar: float = 1.0):
    return lambda x, p: x * p * np.exp(-(x**2 + p**2) / (2 * hbar))


def gauss_symbol(s: float):
    return lambda x, p: np.exp(-(x**2 + p**2) / (2 * s**2))


def monomial_symbol(m: int, n: int):
    return lambda x, p: np.asarray(x, dtype=float) ** m * np.asarray(p, dtype=float) ** n


def parse_symbol(text: str, hbar: float = 1.0):
    """Callback for a symbol spec such as ``mono:2,1`` or ``gauss:0.8``."""
    kind, _, rest = text.strip().lower().partition(":")
    args = [a for a in rest.split(",") if a.strip()] if rest else []
    try:
        vals = [float(a) for a in args]
    except ValueError as exc:
        raise ValueError(f"bad symbol parameters in {text!r}") from exc

    def want(k):
        if len(vals) != k:
            raise ValueError(f"symbol {kind!r} takes {k} parameter(s), got {len(vals)}")

    if kind == "x":
        want(0)
        return lambda x, p: x + 0 * p
    if kind == "p":
        want(0)
        return lambda x, p: p + 0 * x
    if kind == "oscillator":
        want(0)
        return lambda x, p: 0.5 * (x**2 + p**2)
    if kind == "mono":
        want(2)
        m, n = vals
        if m != int(m) or n != int(n) or m < 0 or n < 0:
            raise ValueError("mono needs non-negative integer exponents")
        return monomial_symbol(int(m), int(n))
    if kind == "gauss":
        if len(vals) > 1:
            raise ValueError("gauss takes at most one width")
        s = vals[0] if vals else float(np.sqrt(hbar))
        if not s > 0:
            raise ValueError("gauss width must be positive")
        return gauss_symbol(s)
    if kind == "witness":
        want(0)
        return witness_symbol(hbar)
    if kind == "shifted":
        want(2)
        x0, p0 = vals
        return lambda x, p: np.exp(-((x - x0) ** 2 + (p - p0) ** 2) / (2 * hbar))
    raise ValueError(f"unknown symbol {text!r}; expected one of {SYMBOL_KINDS}")
