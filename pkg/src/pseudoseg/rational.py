"""Exact rational scalars and their ASCII form.

The whole package computes on gmpy2 rationals. A value serializes as
"p/q" with q > 0 and gcd(p, q) = 1, or just "p" when q = 1; the sign
always sits on the numerator.
"""

from __future__ import annotations

import re

from gmpy2 import mpq

Rat = mpq

_LITERAL = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def rat(a, b=None):
    """Build a rational from ints, another rational, or the ASCII form."""
    if isinstance(a, str):
        if b is not None:
            raise TypeError("string form takes no denominator")
        return rat_from_str(a)
    if b is None:
        return mpq(a)
    return mpq(a, b)


def rat_from_str(text):
    m = _LITERAL.match(text.strip())
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return mpq(num, den)


def rat_to_str(value):
    q = mpq(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def dyadic_below_sqrt(square):
    """Largest power of two d with d*d <= square (so square < 4*d*d).

    Used to pick clean length scales under an exact squared-distance
    budget without ever taking a square root.
    """
    square = mpq(square)
    if square <= 0:
        raise ValueError("need a positive squared length")
    d = mpq(1)
    if d * d <= square:
        while (2 * d) ** 2 <= square:
            d = 2 * d
    else:
        while d * d > square:
            d = d / 2
    return d


def dyadic_between(lo, hi):
    """Some dyadic rational strictly between lo and hi."""
    lo = mpq(lo)
    hi = mpq(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    k = 0
    while mpq(1, 1 << k) >= hi - lo:
        k += 1
    num = (lo.numerator * (1 << k)) // lo.denominator + 1
    d = mpq(num, 1 << k)
    assert lo < d < hi
    return d
