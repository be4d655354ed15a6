"""The coefficient family ``b_(i,j,k)`` and its normalisation ``d_(i,j,k)``.

Three structurally different routes compute the same numbers:

``recurrence``
    the defining recurrence, row by row in ``i`` for fixed ``k``;
``genfunc``
    coefficients of ``D_(i,k)(t) = sum_j d_(i,j,k) t^j/j!``, obtained by
    repeatedly subtracting the constant term and dividing by ``1 - e^t``;
``closed_form``
    powers of the signed Bernoulli generating function for ``i <= k``, and a
    Stirling-number sum over harmonic product sums for ``k < i``.

``d_(i,j,k) = (-1)^j j! b_(i,j,k)`` throughout.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .certificate import Certificate, Witness
from .numerics import to_str
from .sequences import SequenceCache, compositions, harmonic_product_sum_oracle
from .series import PowerSeries, gen_series, ps_inverse, ps_mul, ps_pow, ps_shift, valuation_split

__all__ = [
    "Method",
    "TripleIndex",
    "CoeffTable",
    "CoefficientConflict",
    "InternalInconsistency",
    "CoefficientEngine",
    "default_engine",
    "d_from_b",
    "b_from_d",
    "b_recurrence",
    "d_genfunc",
    "b_genfunc",
    "b_closed_form",
    "b_closed_form_oracle",
    "b_value",
    "d_value",
    "cross_validate",
    "table_rows",
    "table_csv",
    "table_json",
]


class Method(str, Enum):
    RECURRENCE = "recurrence"
    GENFUNC = "genfunc"
    CLOSED_FORM = "closed_form"

    @classmethod
    def parse(cls, name: Union[str, "Method"]) -> "Method":
        if isinstance(name, Method):
            return name
        aliases = {"closed": cls.CLOSED_FORM, "rec": cls.RECURRENCE, "gf": cls.GENFUNC}
        try:
            return aliases.get(name) or cls(name)
        except ValueError:
            raise ValueError(f"unknown method {name!r}") from None


@dataclass(frozen=True, order=True)
class TripleIndex:
    i: int
    j: int
    k: int

    def __post_init__(self) -> None:
        if self.i < 1 or self.j < 0 or self.k < 1:
            raise ValueError(f"index out of domain (need i>=1, j>=0, k>=1): {tuple(self)}")

    def __iter__(self) -> Iterator[int]:
        return iter((self.i, self.j, self.k))

    @property
    def vanishes(self) -> bool:
        return self.k > self.i + self.j


IndexLike = Union[TripleIndex, tuple]


def _idx(idx: IndexLike) -> TripleIndex:
    return idx if isinstance(idx, TripleIndex) else TripleIndex(*idx)


class CoefficientConflict(RuntimeError):
    """Two methods produced different values for the same index."""


class InternalInconsistency(RuntimeError):
    """A value the derivation guarantees did not materialise; always a bug."""


class CoeffTable:
    """Insert-only map ``TripleIndex -> (value, method)``."""

    def __init__(self) -> None:
        self.entries: dict[TripleIndex, tuple[Fraction, Method]] = {}

    def insert(self, idx: TripleIndex, value: Fraction, method: Method) -> None:
        present = self.entries.get(idx)
        if present is None:
            self.entries[idx] = (value, method)
        elif present[0] != value:
            raise CoefficientConflict(
                f"{tuple(idx)}: {present[1].value} gave {present[0]}, {method.value} gave {value}"
            )

    def __contains__(self, idx: object) -> bool:
        return idx in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, idx: TripleIndex) -> tuple[Fraction, Method] | None:
        return self.entries.get(idx)


def d_from_b(idx: IndexLike, b: Fraction) -> Fraction:
    j = _idx(idx).j
    return (-1) ** j * math.factorial(j) * Fraction(b)


def b_from_d(idx: IndexLike, d: Fraction) -> Fraction:
    j = _idx(idx).j
    return Fraction(d) / ((-1) ** j * math.factorial(j))


class CoefficientEngine:
    """All three methods with their working caches.

    Caches are per engine; certification shards each build their own.
    """

    def __init__(self, seq: SequenceCache | None = None) -> None:
        self.seq = seq if seq is not None else SequenceCache()
        self.table = CoeffTable()
        # recurrence: k -> (i_cap, j_cap, rows); row r has entries j = 0 .. j_cap + i_cap - r
        self._rec: dict[int, tuple[int, int, list[list[Fraction]]]] = {}
        # genfunc: k -> (start order, [D_(1,k), D_(2,k), ...])
        self._gf: dict[int, tuple[int, list[PowerSeries]]] = {}
        self._inv_unit: PowerSeries | None = None
        self._signed_powers: dict[int, PowerSeries] = {}

    # -- shared ingredients ------------------------------------------------

    def _signed_bernoulli(self, m: int) -> Fraction:
        """``(-1)^m B_m / m!``."""
        return (-1) ** m * self.seq.bernoulli(m) / math.factorial(m)

    def _base(self, j: int, k: int) -> Fraction:
        """``b_(1,j,k)``."""
        if k > 1 + j:
            return Fraction(0)
        return self._signed_bernoulli(j + 1 - k)

    # -- recurrence --------------------------------------------------------

    def _recurrence_rows(self, i: int, j: int, k: int) -> list[list[Fraction]]:
        cached = self._rec.get(k)
        if cached is not None:
            i_cap, j_cap, rows = cached
            if i <= i_cap and i + j <= i_cap + j_cap:
                return rows
            # grow geometrically so ascending sweeps rebuild O(log n) times
            top = i_cap + j_cap if i + j <= i_cap + j_cap else max(i + j, 2 * (i_cap + j_cap))
            i = i_cap if i <= i_cap else max(i, 2 * i_cap)
            j = max(top - i, j)
        top = j + i - 1  # highest j index needed in row 1
        beta = PowerSeries(tuple(self._signed_bernoulli(m) for m in range(top + 2)))
        rows = [[self._base(jj, k) for jj in range(top + 1)]]
        for r in range(2, i + 1):
            prev = rows[-1]
            length = j + i - r + 1
            # b_(r,jj,k) = sum_{m=0}^{jj} beta_m b_(r-1, jj+1-m, k)
            #            = [t^(jj+1)] (beta * prev) - beta_(jj+1) * prev[0]
            conv = ps_mul(beta.truncate(length), PowerSeries(tuple(prev[: length + 1])))
            rows.append([conv[jj + 1] - beta[jj + 1] * prev[0] for jj in range(length)])
        self._rec[k] = (i, j, rows)
        return rows

    def b_recurrence(self, idx: IndexLike) -> Fraction:
        idx = _idx(idx)
        rows = self._recurrence_rows(idx.i, idx.j, idx.k)
        return rows[idx.i - 1][idx.j]

    # -- generating function ----------------------------------------------

    def _inverse_unit(self, order: int) -> PowerSeries:
        """``1/u`` where ``1 - e^t = t * u(t)``."""
        if self._inv_unit is None or self._inv_unit.order < order:
            split = valuation_split(gen_series("one_minus_exp", order + 1))
            if split.valuation != 1:
                raise InternalInconsistency("1 - e^t must have valuation 1")
            self._inv_unit = ps_inverse(split.unit_part)
        return self._inv_unit.truncate(order)

    def _expected_constant(self, r: int, k: int) -> Fraction:
        """``d_(r,0,k)``: zero below ``r = k``, a harmonic product sum from there on."""
        if k > r:
            return Fraction(0)
        return self.seq.harmonic_product_sum(k, r - k)

    def _genfunc_chain(self, i: int, j: int, k: int) -> list[PowerSeries]:
        cached = self._gf.get(k)
        if cached is not None and cached[0] >= i + j - 1:
            start, chain = cached
        else:
            start = max(i + j, 2 * cached[0] if cached else 0)
            inv_u = self._inverse_unit(start)
            sign = (-1) ** k
            # D_(1,k) = (-t)^k / (1 - e^t) = (-1)^k t^(k-1) / u
            first = tuple(
                sign * inv_u[n - k + 1] if n >= k - 1 else Fraction(0) for n in range(start + 1)
            )
            chain = [PowerSeries(first)]
        while len(chain) < i:
            r = len(chain)
            prev = chain[-1]
            constant = prev[0]
            expected = self._expected_constant(r, k)
            if constant != expected:
                raise InternalInconsistency(
                    f"constant term of D_({r},{k}) is {constant}, expected d_({r},0,{k}) = {expected}"
                )
            shifted = ps_shift(PowerSeries((Fraction(0),) + prev.coeffs[1:]), -1)
            chain.append(ps_mul(shifted, self._inverse_unit(shifted.order)))
        self._gf[k] = (start, chain)
        return chain

    def generating_function(self, i: int, k: int, order: int) -> PowerSeries:
        """``D_(i,k)(t)`` known to at least ``order``."""
        return self._genfunc_chain(i, order, k)[i - 1]

    def d_genfunc(self, idx: IndexLike) -> Fraction:
        idx = _idx(idx)
        series = self._genfunc_chain(idx.i, idx.j, idx.k)[idx.i - 1]
        return series[idx.j] * math.factorial(idx.j)

    def b_genfunc(self, idx: IndexLike) -> Fraction:
        idx = _idx(idx)
        return b_from_d(idx, self.d_genfunc(idx))

    # -- closed form -------------------------------------------------------

    def signed_bernoulli_power(self, i: int, order: int) -> PowerSeries:
        """``(sum_l (-1)^l B_l t^l / l!)^i`` to at least ``order``."""
        cached = self._signed_powers.get(i)
        if cached is not None and cached.order >= order:
            return cached
        base = self.seq.bernoulli_egf(order, signed=True)
        prev = self._signed_powers.get(i - 1)
        if i == 1:
            power = base
        elif prev is not None and prev.order >= order:
            power = ps_mul(prev.truncate(order), base)
        else:
            power = ps_pow(base, i)
        self._signed_powers[i] = power
        return power

    def b_closed_form(self, idx: IndexLike) -> Fraction:
        i, j, k = _idx(idx)
        if k > i + j:
            return Fraction(0)
        if k >= i:
            n = i + j - k
            return self.signed_bernoulli_power(i, n)[n]
        total = Fraction(0)
        for p in range(j + 1):
            s = self.seq.stirling2(j, p)
            if s:
                total += (-1) ** p * math.factorial(p) * s * self.seq.harmonic_product_sum(k, p + i - k)
        return total / ((-1) ** j * math.factorial(j))

    def b_closed_form_oracle(self, idx: IndexLike) -> Fraction:
        """The explicit formulas summed literally over compositions.

        Exponential in the index size; only for small indices.
        """
        i, j, k = _idx(idx)
        if k > i + j:
            return Fraction(0)
        if k >= i:
            total = Fraction(0)
            for parts in compositions(i + j - k, i):
                total += math.prod((self._signed_bernoulli(l) for l in parts), start=Fraction(1))
            return total
        total = Fraction(0)
        for p in range(j + 1):
            s = self.seq.stirling2(j, p)
            if s:
                total += (-1) ** p * math.factorial(p) * s * harmonic_product_sum_oracle(k, p + i - k)
        return total / ((-1) ** j * math.factorial(j))

    # -- dispatch ----------------------------------------------------------

    def b(self, idx: IndexLike, method: Union[str, Method] = Method.CLOSED_FORM) -> Fraction:
        idx = _idx(idx)
        method = Method.parse(method)
        if method is Method.RECURRENCE:
            value = self.b_recurrence(idx)
        elif method is Method.GENFUNC:
            value = self.b_genfunc(idx)
        else:
            value = self.b_closed_form(idx)
        self.table.insert(idx, value, method)
        return value

    def d(self, idx: IndexLike, method: Union[str, Method] = Method.CLOSED_FORM) -> Fraction:
        idx = _idx(idx)
        return d_from_b(idx, self.b(idx, method))

    def cross_validate(self, i_max: int, j_max: int) -> Certificate:
        """Compare all three methods on ``1<=i<=i_max, 0<=j<=j_max, 1<=k<=i+j+2``."""
        if i_max < 1 or j_max < 0:
            raise ValueError("need i_max >= 1 and j_max >= 0")
        witnesses: list[Witness] = []
        checked = 0
        for k in range(1, i_max + j_max + 3):
            # build each method's per-k cache once at full size
            top = TripleIndex(i_max, j_max, k)
            self.b_recurrence(top)
            self.d_genfunc(top)
            for i in range(max(1, k - j_max - 2), i_max + 1):
                for j in range(max(0, k - i - 2), j_max + 1):
                    idx = TripleIndex(i, j, k)
                    checked += 1
                    values = {
                        Method.RECURRENCE: self.b_recurrence(idx),
                        Method.GENFUNC: self.b_genfunc(idx),
                        Method.CLOSED_FORM: self.b_closed_form(idx),
                    }
                    distinct = set(values.values())
                    ref = values[Method.RECURRENCE]
                    if len(distinct) > 1:
                        reason = "methods disagree: " + ", ".join(
                            f"{m.value}={to_str(v)}" for m, v in values.items()
                        )
                        witnesses.append(Witness(i, j, k, to_str(ref), reason))
                    elif idx.vanishes and ref != 0:
                        witnesses.append(Witness(i, j, k, to_str(ref), "nonzero beyond k = i+j"))
                    else:
                        for m, v in values.items():
                            self.table.insert(idx, v, m)
        return Certificate.build(
            "three_method_agreement", {"i_max": i_max, "j_max": j_max}, checked, witnesses
        )


default_engine = CoefficientEngine()


def b_recurrence(idx: IndexLike) -> Fraction:
    return default_engine.b_recurrence(idx)


def d_genfunc(idx: IndexLike) -> Fraction:
    return default_engine.d_genfunc(idx)


def b_genfunc(idx: IndexLike) -> Fraction:
    return default_engine.b_genfunc(idx)


def b_closed_form(idx: IndexLike) -> Fraction:
    return default_engine.b_closed_form(idx)


def b_closed_form_oracle(idx: IndexLike) -> Fraction:
    return default_engine.b_closed_form_oracle(idx)


def b_value(idx: IndexLike, method: Union[str, Method] = Method.CLOSED_FORM) -> Fraction:
    return default_engine.b(idx, method)


def d_value(idx: IndexLike, method: Union[str, Method] = Method.CLOSED_FORM) -> Fraction:
    return default_engine.d(idx, method)


def cross_validate(i_max: int, j_max: int, engine: CoefficientEngine | None = None) -> Certificate:
    return (engine or CoefficientEngine()).cross_validate(i_max, j_max)


# -- table export -------------------------------------------------------------

TABLE_FIELDS = ("i", "j", "k", "b", "d", "method")


def table_rows(i_max: int, j_max: int, method: Union[str, Method] = Method.CLOSED_FORM,
               engine: CoefficientEngine | None = None) -> list[dict[str, object]]:
    """Rows for ``1<=i<=i_max, 1<=j<=j_max, 1<=k<=i+j`` in index order."""
    engine = engine or CoefficientEngine()
    method = Method.parse(method)
    rows = []
    for i in range(1, i_max + 1):
        for j in range(1, j_max + 1):
            for k in range(1, i + j + 1):
                idx = TripleIndex(i, j, k)
                b = engine.b(idx, method)
                rows.append({"i": i, "j": j, "k": k, "b": to_str(b),
                             "d": to_str(d_from_b(idx, b)), "method": method.value})
    return rows


def table_csv(rows: Iterable[dict[str, object]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TABLE_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def table_json(rows: Iterable[dict[str, object]]) -> str:
    return json.dumps(list(rows), indent=1)
