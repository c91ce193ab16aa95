"""Small numeric helpers shared by the exact and asymptotic layers.

Probabilities travel as :class:`fractions.Fraction` when the caller supplied
them exactly (a ``Fraction``, an ``int`` or an ``"a/b"`` string) and as
``float`` otherwise.  Everything downstream keys its numeric mode off that.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number
from typing import Union

Scalar = Union[Fraction, float, complex]

HALF = Fraction(1, 2)
HALF_TOLERANCE = 1e-12


def as_probability(p) -> Fraction | float:
    """Normalise ``p`` to a Fraction (exact input) or float, and range-check it."""
    if isinstance(p, str):
        text = p.strip()
        value: Fraction | float
        if "/" in text:
            num, den = text.split("/", 1)
            value = Fraction(int(num), int(den))
        else:
            value = float(text)
    elif isinstance(p, bool):
        raise TypeError("probability must be a number, not bool")
    elif isinstance(p, (Fraction, int)):
        value = Fraction(p)
    elif isinstance(p, float):
        value = p
    else:
        raise TypeError(f"unsupported probability type {type(p).__name__}")
    if not 0 < value < 1:
        raise ValueError(f"probability must lie in (0, 1), got {value}")
    return value


def is_rational(x) -> bool:
    return isinstance(x, Fraction)


def is_half(p: Fraction | float) -> bool:
    """Exact test for p == 1/2.

    Float inputs close to 1/2 are ambiguous for formulas with a separate
    p = 1/2 branch, so they are refused rather than silently classified.
    """
    if isinstance(p, Fraction):
        return p == HALF
    if abs(p - 0.5) <= HALF_TOLERANCE:
        raise ValueError(
            "p is within 1e-12 of 1/2; pass it as the rational '1/2' "
            "(or a Fraction) so the p = 1/2 branch can be selected exactly"
        )
    return False


def rising(x, k: int):
    """x (x+1) ... (x+k-1); works for Fraction, float and complex."""
    out = 1
    for i in range(k):
        out = out * (x + i)
    return out


def falling(x, k: int):
    """x (x-1) ... (x-k+1)."""
    out = 1
    for i in range(k):
        out = out * (x - i)
    return out


def gbinom(x, k: int):
    """Generalised binomial coefficient C(x, k) by the iterative product.

    C(x, 0) = 1 and C(x, k) = C(x, k-1) (x-k+1)/k.  Exact for Fraction ``x``.
    Gamma quotients are avoided on purpose: ``x`` often sits on a pole.
    """
    if k < 0:
        return 0
    out = Fraction(1) if isinstance(x, (Fraction, int)) else 1.0
    for i in range(1, k + 1):
        out = out * (x - i + 1) / i
    return out


def binom_shift(c, m: int):
    """C(m + c, m) = prod_{k=1}^{m} (1 + c/k), for real, complex or rational c.

    This is the numerically benign way to evaluate C(n + c, n) when n is large.
    """
    if isinstance(c, (Fraction, int)):
        out = Fraction(1)
        for k in range(1, m + 1):
            out *= 1 + Fraction(c) / k
        return out
    out = 1.0 if not isinstance(c, complex) else complex(1.0)
    for k in range(1, m + 1):
        out *= 1 + c / k
    return out


def harmonic(n: int, order: int = 1, exact: bool = True):
    if exact:
        return sum((Fraction(1, j**order) for j in range(1, n + 1)), Fraction(0))
    return math.fsum(1.0 / j**order for j in range(1, n + 1))


def fmt_rational(x) -> str:
    """Render an exact value as ``"num/den"``; floats go through ``repr``."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return f"{x}/1"
    return repr(float(x))


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


def to_float(x) -> float:
    if isinstance(x, Number) and not isinstance(x, complex):
        return float(x)
    raise TypeError(f"cannot convert {x!r} to float")
