"""Special-number sequences: Bernoulli, higher-order Bernoulli, higher-order
Daehee, Stirling numbers of the second kind, harmonic product sums and
multinomial coefficients.

Each sequence has a series-based main path and, where it matters, an
independent combinatorial oracle (``*_oracle`` functions).  The oracles are
slow on purpose and only meant for tests and verification sweeps.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator, Sequence

from .series import PowerSeries, gen_series, ps_mul, ps_pow

__all__ = [
    "SequenceCache",
    "default_cache",
    "bernoulli",
    "higher_bernoulli",
    "daehee",
    "stirling2",
    "harmonic_product_sum",
    "multinomial",
    "bernoulli_oracle",
    "stirling2_genfunc",
    "harmonic_product_sum_oracle",
    "compositions",
]


class SequenceCache:
    """Insert-only memo tables for the sequences.

    A cache is not shared between processes; each certification shard builds
    its own.  Entries are never rewritten once stored.
    """

    def __init__(self) -> None:
        self.bernoulli_table: list[Fraction] = []
        self.stirling2_rows: list[list[int]] = [[1]]
        self.harmonic_sums: dict[tuple[int, int], Fraction] = {}
        self.log_powers: dict[int, PowerSeries] = {}

    # -- Bernoulli ---------------------------------------------------------

    def bernoulli(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("n must be >= 0")
        if n >= len(self.bernoulli_table):
            order = max(n, 2 * len(self.bernoulli_table), 16)
            egf = gen_series("bernoulli_egf", order)
            start = len(self.bernoulli_table)
            self.bernoulli_table.extend(
                egf[m] * math.factorial(m) for m in range(start, order + 1)
            )
        return self.bernoulli_table[n]

    def bernoulli_egf(self, order: int, signed: bool = False) -> PowerSeries:
        """``sum B_n t^n/n!``; with ``signed`` the coefficients are ``(-1)^n B_n/n!``."""
        return PowerSeries(
            tuple(
                (-1 if signed and n % 2 else 1) * self.bernoulli(n) / math.factorial(n)
                for n in range(order + 1)
            )
        )

    def higher_bernoulli(self, n: int, i: int) -> Fraction:
        if n < 0 or i < 1:
            raise ValueError("need n >= 0 and i >= 1")
        return ps_pow(self.bernoulli_egf(n), i)[n] * math.factorial(n)

    # -- Daehee ------------------------------------------------------------

    def daehee(self, q: int, k: int) -> Fraction:
        if q < 0 or k < 1:
            raise ValueError("need q >= 0 and k >= 1")
        return ps_pow(gen_series("log_one_plus_over_t", q), k)[q] * math.factorial(q)

    # -- Stirling numbers of the second kind ------------------------------

    def stirling2(self, j: int, p: int) -> int:
        if j < 0 or p < 0:
            raise ValueError("Stirling indices must be nonnegative")
        if p > j:
            raise ValueError(f"stirling2 needs p <= j (got j={j}, p={p})")
        rows = self.stirling2_rows
        while len(rows) <= j:
            prev = rows[-1]
            n = len(rows)
            row = [0] * (n + 1)
            for m in range(1, n + 1):
                row[m] = (m * prev[m] if m < n else 0) + prev[m - 1]
            rows.append(row)
        return rows[j][p]

    # -- harmonic product sums --------------------------------------------

    def _log_power_series(self, k: int, order: int) -> PowerSeries:
        """``(-log(1-s)/s)^k`` to at least ``order``.

        Built from the cached ``k-1`` power when that one is long enough, which
        is the common case in sweeps that walk ``k`` upwards.
        """
        cached = self.log_powers.get(k)
        if cached is not None and cached.order >= order:
            return cached
        base = gen_series("neg_log_one_minus_over_s", order)
        prev = self.log_powers.get(k - 1)
        if k == 1:
            power = base
        elif prev is not None and prev.order >= order:
            power = ps_mul(prev.truncate(order), base)
        else:
            power = ps_pow(base, k)
        self.log_powers[k] = power
        return power

    def harmonic_product_sum(self, k: int, q: int) -> Fraction:
        """``[s^q] (-log(1-s)/s)^k``, the sum of ``1/prod(l_r + 1)`` over
        compositions of ``q`` into ``k`` nonnegative parts."""
        if k < 1 or q < 0:
            raise ValueError("need k >= 1 and q >= 0")
        key = (k, q)
        value = self.harmonic_sums.get(key)
        if value is None:
            value = self._log_power_series(k, q)[q]
            self.harmonic_sums[key] = value
        return value

    def harmonic_row(self, k: int, q_max: int) -> list[Fraction]:
        """All ``harmonic_product_sum(k, q)`` for ``q <= q_max`` in one pass."""
        power = self._log_power_series(k, q_max)
        row = list(power.coeffs[: q_max + 1])
        for q, value in enumerate(row):
            self.harmonic_sums.setdefault((k, q), value)
        return row


default_cache = SequenceCache()


def bernoulli(n: int) -> Fraction:
    """``B_n`` with the convention ``B_1 = -1/2`` (coefficient of ``t^n/n!`` in ``t/(e^t-1)``)."""
    return default_cache.bernoulli(n)


def higher_bernoulli(n: int, i: int) -> Fraction:
    """``B_n^{(i)}``: ``n!`` times the coefficient of ``t^n`` in ``(t/(e^t-1))^i``."""
    return default_cache.higher_bernoulli(n, i)


def daehee(q: int, k: int) -> Fraction:
    """Higher-order Daehee number ``D_q^{(k)}`` from ``(log(1+t)/t)^k``."""
    return default_cache.daehee(q, k)


def stirling2(j: int, p: int) -> int:
    return default_cache.stirling2(j, p)


def harmonic_product_sum(k: int, q: int) -> Fraction:
    return default_cache.harmonic_product_sum(k, q)


def multinomial(n: int, parts: Sequence[int]) -> int:
    if any(p < 0 for p in parts):
        raise ValueError("parts must be nonnegative")
    if sum(parts) != n:
        raise ValueError(f"parts {list(parts)} do not sum to {n}")
    result = math.factorial(n)
    for p in parts:
        result //= math.factorial(p)
    return result


# -- independent oracles ----------------------------------------------------


def bernoulli_oracle(n: int) -> Fraction:
    """``B_n`` from ``sum_{m=0}^{n} C(n+1, m) B_m = 0``; no series involved."""
    table = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(math.comb(m + 1, r) * table[r] for r in range(m))
        table.append(-Fraction(acc) / (m + 1))
    return table[n]


def stirling2_genfunc(j: int, p: int) -> int:
    """``j! [t^j] (e^t - 1)^p / p!``."""
    if p > j:
        raise ValueError(f"stirling2 needs p <= j (got j={j}, p={p})")
    coeff = ps_pow(gen_series("exp_minus_one", j), p)[j] * math.factorial(j) / math.factorial(p)
    if coeff.denominator != 1:
        raise ArithmeticError(f"non-integral Stirling value {coeff}")
    return coeff.numerator


def compositions(q: int, k: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``q`` into ``k`` parts (stars and bars)."""
    for bars in itertools.combinations(range(q + k - 1), k - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(q + k - 1 - prev - 1)
        yield tuple(parts)


def harmonic_product_sum_oracle(k: int, q: int) -> Fraction:
    """Brute-force enumeration; exponential, keep ``k`` and ``q`` small."""
    total = Fraction(0)
    for parts in compositions(q, k):
        total += Fraction(1, math.prod(p + 1 for p in parts))
    return total
