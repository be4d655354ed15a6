"""Truncated formal power series over the rationals.

A :class:`PowerSeries` stores the coefficients of ``t^0 .. t^order``; anything
above ``order`` is unknown (not zero).  Every operation returns the largest
order its inputs determine, so truncation errors cannot pass silently.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

try:
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover
    _bigint = int

from .numerics import RationalLike, rat_dot, scale_to_integers, to_str

__all__ = [
    "SeriesError",
    "SeriesValuationError",
    "CompositionError",
    "PowerSeries",
    "ValuedSeries",
    "GENERATORS",
    "one",
    "zero",
    "monomial",
    "ps_add",
    "ps_sub",
    "ps_neg",
    "ps_scale",
    "ps_mul",
    "ps_inverse",
    "ps_div",
    "ps_pow",
    "ps_compose",
    "ps_shift",
    "valuation_split",
    "gen_series",
]


class SeriesError(ArithmeticError):
    pass


class SeriesValuationError(SeriesError):
    """Raised for division by a series without a unit constant term, or
    a valuation request on a series that is zero to its known order."""


class CompositionError(SeriesError):
    pass


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a power series needs at least the constant coefficient")
        coeffs = self.coeffs
        if type(coeffs) is not tuple or not all(type(c) is Fraction for c in coeffs):
            object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    @classmethod
    def of(cls, coeffs: Iterable[RationalLike]) -> "PowerSeries":
        return cls(tuple(Fraction(c) for c in coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.order:
            raise IndexError(f"coefficient of t^{n} is not determined (order {self.order})")
        return self.coeffs[n]

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise SeriesError(f"cannot raise order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> str:
        return json.dumps([to_str(c) for c in self.coeffs])

    def __add__(self, other: "SeriesLike") -> "PowerSeries":
        return ps_add(self, _coerce(other, self.order))

    __radd__ = __add__

    def __sub__(self, other: "SeriesLike") -> "PowerSeries":
        return ps_sub(self, _coerce(other, self.order))

    def __rsub__(self, other: "SeriesLike") -> "PowerSeries":
        return ps_sub(_coerce(other, self.order), self)

    def __neg__(self) -> "PowerSeries":
        return ps_neg(self)

    def __mul__(self, other: "SeriesLike") -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return ps_mul(self, other)
        return ps_scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: "SeriesLike") -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return ps_div(self, other)
        return ps_scale(self, 1 / Fraction(other))

    def __pow__(self, n: int) -> "PowerSeries":
        return ps_pow(self, n)

    def __repr__(self) -> str:
        terms = ", ".join(to_str(c) for c in self.coeffs)
        return f"PowerSeries([{terms}], order={self.order})"


SeriesLike = Union[PowerSeries, Fraction, int]


def _coerce(x: SeriesLike, order: int) -> PowerSeries:
    if isinstance(x, PowerSeries):
        return x
    return PowerSeries((Fraction(x),) + (Fraction(0),) * order)


def one(order: int) -> PowerSeries:
    return monomial(0, order)


def zero(order: int) -> PowerSeries:
    return PowerSeries((Fraction(0),) * (order + 1))


def monomial(power: int, order: int, coefficient: RationalLike = 1) -> PowerSeries:
    """``coefficient * t^power`` known to ``order``."""
    coeffs = [Fraction(0)] * (order + 1)
    if power <= order:
        coeffs[power] = Fraction(coefficient)
    return PowerSeries(tuple(coeffs))


@dataclass(frozen=True)
class ValuedSeries:
    """``t^valuation * unit_part`` with ``unit_part[0] != 0``.

    Negative valuations give formal Laurent series with a finite principal part.
    """

    valuation: int
    unit_part: PowerSeries

    def __post_init__(self) -> None:
        if self.unit_part[0] == 0:
            raise SeriesValuationError("unit part must have a nonzero constant term")

    @property
    def is_power_series(self) -> bool:
        return self.valuation >= 0

    def __mul__(self, other: "ValuedSeries") -> "ValuedSeries":
        return ValuedSeries(self.valuation + other.valuation, ps_mul(self.unit_part, other.unit_part))

    def __truediv__(self, other: "ValuedSeries") -> "ValuedSeries":
        return ValuedSeries(self.valuation - other.valuation, ps_div(self.unit_part, other.unit_part))

    def inverse(self) -> "ValuedSeries":
        return ValuedSeries(-self.valuation, ps_inverse(self.unit_part))

    def to_power_series(self) -> PowerSeries:
        """Multiply out ``t^valuation``; only valid for nonnegative valuation."""
        if self.valuation < 0:
            raise SeriesValuationError(f"series has a pole of order {-self.valuation}")
        return ps_shift(self.unit_part, self.valuation)


def ps_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order) + 1
    return PowerSeries(tuple(x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n])))


def ps_sub(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order) + 1
    return PowerSeries(tuple(x - y for x, y in zip(a.coeffs[:n], b.coeffs[:n])))


def ps_neg(a: PowerSeries) -> PowerSeries:
    return PowerSeries(tuple(-c for c in a.coeffs))


def ps_scale(a: PowerSeries, c: RationalLike) -> PowerSeries:
    c = Fraction(c)
    return PowerSeries(tuple(c * x for x in a.coeffs))


def ps_shift(a: PowerSeries, n: int) -> PowerSeries:
    """Multiply by ``t^n`` (``n >= 0``), or divide by ``t^-n`` when the low
    coefficients are zero.  The order moves with the shift."""
    if n >= 0:
        return PowerSeries((Fraction(0),) * n + a.coeffs)
    if any(a.coeffs[: -n]):
        raise SeriesValuationError(f"series is not divisible by t^{-n}")
    if -n > a.order:
        raise SeriesValuationError("shift leaves no determined coefficients")
    return PowerSeries(a.coeffs[-n:])


def _support(ints: Sequence[int]) -> tuple[int, int]:
    lo = next((i for i, x in enumerate(ints) if x), len(ints))
    hi = len(ints) - next((i for i, x in enumerate(reversed(ints)) if x), len(ints))
    return lo, hi


def ps_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at ``min(a.order, b.order)``.

    Both operands are put over a common denominator so the inner loop is pure
    integer arithmetic; each output coefficient is reduced once.
    """
    order = min(a.order, b.order)
    xa, da = scale_to_integers(a.coeffs[: order + 1])
    xb, db = scale_to_integers(b.coeffs[: order + 1])
    xa = [_bigint(x) for x in xa]
    xb = [_bigint(x) for x in xb]
    alo, ahi = _support(xa)
    blo, bhi = _support(xb)
    den = da * db
    out = []
    for n in range(order + 1):
        p_lo = max(alo, n - bhi + 1)
        p_hi = min(ahi - 1, n - blo)
        if p_lo > p_hi:
            out.append(Fraction(0))
            continue
        s = sum(xa[p] * xb[n - p] for p in range(p_lo, p_hi + 1))
        out.append(Fraction(int(s), den))
    return PowerSeries(tuple(out))


def ps_inverse(b: PowerSeries) -> PowerSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    b0 = b.coeffs[0]
    if b0 == 0:
        raise SeriesValuationError(
            "constant term is zero; split off the valuation with valuation_split first"
        )
    inv = [1 / b0]
    for n in range(1, b.order + 1):
        acc = rat_dot(b.coeffs[1 : n + 1], reversed(inv))
        inv.append(-acc * inv[0])
    return PowerSeries(tuple(inv))


def ps_div(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    order = min(a.order, b.order)
    if b.coeffs[0] == 0:
        raise SeriesValuationError(
            "divisor has zero constant term; use valuation_split on both operands"
        )
    return ps_mul(a.truncate(order), ps_inverse(b.truncate(order)))


def ps_pow(f: PowerSeries, n: int) -> PowerSeries:
    if n < 0:
        raise ValueError("negative powers: take ps_inverse first")
    result = one(f.order)
    base = f
    while n:
        if n & 1:
            result = ps_mul(result, base)
        n >>= 1
        if n:
            base = ps_mul(base, base)
    return result


def ps_compose(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """``f(g(t))`` for ``g(0) == 0``, by Horner accumulation."""
    if g.coeffs[0] != 0:
        raise CompositionError("inner series must have zero constant term")
    order = min(f.order, g.order)
    g = g.truncate(order)
    acc = one(order) * f.coeffs[order]
    for m in range(order - 1, -1, -1):
        acc = ps_mul(acc, g)
        acc = PowerSeries((acc.coeffs[0] + f.coeffs[m],) + acc.coeffs[1:])
    return acc


def valuation_split(a: PowerSeries) -> ValuedSeries:
    for v, c in enumerate(a.coeffs):
        if c != 0:
            return ValuedSeries(v, PowerSeries(a.coeffs[v:]))
    raise SeriesValuationError("series is zero up to its order; valuation undetermined")


def _bernoulli_egf(order: int) -> PowerSeries:
    # t/(e^t - 1) = 1 / ((e^t - 1)/t)
    quotient = PowerSeries(tuple(Fraction(1, math.factorial(n + 1)) for n in range(order + 1)))
    return ps_inverse(quotient)


GENERATORS = {
    "bernoulli_egf": _bernoulli_egf,
    "exp": lambda order: PowerSeries(tuple(Fraction(1, math.factorial(n)) for n in range(order + 1))),
    "one_minus_exp": lambda order: PowerSeries(
        (Fraction(0),) + tuple(Fraction(-1, math.factorial(n)) for n in range(1, order + 1))
    ),
    "exp_minus_one": lambda order: PowerSeries(
        (Fraction(0),) + tuple(Fraction(1, math.factorial(n)) for n in range(1, order + 1))
    ),
    "neg_log_one_minus_over_s": lambda order: PowerSeries(
        tuple(Fraction(1, q + 1) for q in range(order + 1))
    ),
    "log_one_plus_over_t": lambda order: PowerSeries(
        tuple(Fraction((-1) ** q, q + 1) for q in range(order + 1))
    ),
}


def gen_series(which: str, order: int) -> PowerSeries:
    """Named generator series known exactly to ``order``."""
    try:
        build = GENERATORS[which]
    except KeyError:
        raise ValueError(f"unknown generator {which!r}; expected one of {sorted(GENERATORS)}") from None
    if order < 0:
        raise ValueError("order must be nonnegative")
    return build(order)
