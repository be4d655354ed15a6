"""Exact rational arithmetic.

Every coefficient in the package is a :class:`fractions.Fraction`, which is
already kept in lowest terms with a positive denominator.  This module adds
the small amount of glue the rest of the package needs on top of it: a
strict string form, a comparison returning an ordering, and integer-batched
dot products used by the convolution kernels.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int]

__all__ = [
    "Rational",
    "rat",
    "rat_add",
    "rat_sub",
    "rat_mul",
    "rat_div",
    "rat_neg",
    "rat_cmp",
    "rat_sign",
    "to_str",
    "parse",
    "scale_to_integers",
    "rat_dot",
]

_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def rat(x: RationalLike, d: int = 1) -> Fraction:
    """Build a canonical rational; rejects floats so nothing inexact leaks in."""
    if isinstance(x, float) or isinstance(d, float):
        raise TypeError("floating point values are not accepted")
    if d == 0:
        raise ZeroDivisionError("rational with zero denominator")
    return Fraction(x, d)


def rat_add(a: RationalLike, b: RationalLike) -> Fraction:
    return Fraction(a) + Fraction(b)


def rat_sub(a: RationalLike, b: RationalLike) -> Fraction:
    return Fraction(a) - Fraction(b)


def rat_mul(a: RationalLike, b: RationalLike) -> Fraction:
    return Fraction(a) * Fraction(b)


def rat_neg(a: RationalLike) -> Fraction:
    return -Fraction(a)


def rat_div(a: RationalLike, b: RationalLike) -> Fraction:
    b = Fraction(b)
    if b == 0:
        raise ZeroDivisionError("rational division by zero")
    return Fraction(a) / b


def rat_cmp(a: RationalLike, b: RationalLike) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``.

    Cross-multiplies the integer parts; denominators are positive so the sign
    of the difference is the ordering.
    """
    a, b = Fraction(a), Fraction(b)
    diff = a.numerator * b.denominator - b.numerator * a.denominator
    return (diff > 0) - (diff < 0)


def rat_sign(a: RationalLike) -> int:
    return rat_cmp(a, 0)


def to_str(a: RationalLike) -> str:
    """Serialize as ``"p/q"`` (``q > 1``) or ``"p"`` for integers."""
    a = Fraction(a)
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


def parse(s: str) -> Fraction:
    """Inverse of :func:`to_str`.  Only the ``p`` / ``p/q`` forms are accepted."""
    m = _RAT_RE.match(s.strip())
    if m is None:
        raise ValueError(f"not an exact rational: {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {s!r}")
    return Fraction(num, den)


def scale_to_integers(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Return integers ``n`` and a common denominator ``D`` with ``values[i] == n[i]/D``."""
    if not values:
        return [], 1
    den = math.lcm(*(v.denominator for v in values))
    return [v.numerator * (den // v.denominator) for v in values], den


def rat_dot(xs: Iterable[Fraction], ys: Iterable[Fraction]) -> Fraction:
    """Exact ``sum(x*y)`` with a single reduction at the end."""
    pairs = [(x, y) for x, y in zip(xs, ys) if x and y]
    if not pairs:
        return Fraction(0)
    dens = [x.denominator * y.denominator for x, y in pairs]
    den = math.lcm(*dens)
    total = 0
    for (x, y), d in zip(pairs, dens):
        total += x.numerator * y.numerator * (den // d)
    return Fraction(total, den)
