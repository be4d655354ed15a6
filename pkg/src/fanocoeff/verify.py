"""Positivity certification and the identity regression suite."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from .certificate import Certificate, Witness
from .coefficients import CoefficientEngine, Method, TripleIndex, d_from_b
from .numerics import rat_sign, to_str
from .sequences import bernoulli_oracle, harmonic_product_sum_oracle, stirling2_genfunc
from .series import PowerSeries, SeriesValuationError, gen_series, one, ps_compose, ps_mul, ps_pow, ps_shift, valuation_split

__all__ = [
    "positivity_count",
    "certify_positivity",
    "sign_report",
    "IdentityBounds",
    "IDENTITIES",
    "check_identity",
    "verify_identities",
    "write_certificate",
]


def positivity_count(n: int) -> int:
    """Number of indices ``1<=i<n, j in {1,2}, 1<=k<=i+j``."""
    return sum(2 * i + 3 for i in range(1, n))


def _shard_bounds(n: int, shards: int) -> list[tuple[int, int]]:
    """Split ``k = 1 .. n+1`` into contiguous blocks of roughly equal work.

    The cost of a fixed ``k`` is dominated by a series power of order
    ``n + 1 - k``, hence the quadratic weights.
    """
    ks = list(range(1, n + 2))
    weights = [(n + 2 - k) ** 2 for k in ks]
    target = sum(weights) / shards
    blocks, lo, acc = [], ks[0], 0.0
    for k, w in zip(ks, weights):
        acc += w
        if acc >= target and len(blocks) < shards - 1:
            blocks.append((lo, k))
            lo, acc = k + 1, 0.0
    if lo <= ks[-1]:
        blocks.append((lo, ks[-1]))
    return blocks


def _certify_block(n: int, method: str, k_lo: int, k_hi: int,
                   engine: CoefficientEngine | None = None) -> tuple[int, list[Witness]]:
    engine = engine or CoefficientEngine()
    method = Method.parse(method)
    checked = 0
    witnesses = []
    for k in range(k_lo, k_hi + 1):
        i_lo = max(1, k - 2)
        if i_lo > n - 1:
            continue
        # warm the per-k caches at full size before walking i upwards
        if method is Method.CLOSED_FORM and k < n - 1:
            engine.seq.harmonic_row(k, n + 1 - k)
        elif method is Method.RECURRENCE:
            engine.b_recurrence(TripleIndex(n - 1, 2, k))
        elif method is Method.GENFUNC:
            engine.d_genfunc(TripleIndex(n - 1, 2, k))
        for i in range(i_lo, n):
            for j in (1, 2):
                if k > i + j:
                    continue
                value = engine.b(TripleIndex(i, j, k), method)
                checked += 1
                sign = rat_sign(value)
                if sign <= 0:
                    witnesses.append(Witness(i, j, k, to_str(value), "zero" if sign == 0 else "negative"))
    return checked, witnesses


def certify_positivity(n: int, method: Union[str, Method] = Method.CLOSED_FORM, shards: int = 1,
                       engine: CoefficientEngine | None = None) -> Certificate:
    """Check ``b_(i,j,k) > 0`` for ``1<=i<n``, ``j in {1,2}``, ``1<=k<=i+j``.

    With ``shards > 1`` the ``k`` range is split across worker processes, each
    with its own caches; results are merged in index order.
    """
    if n < 2:
        raise ValueError("N must be >= 2")
    method = Method.parse(method)
    if shards < 1:
        raise ValueError("shards must be >= 1")
    blocks = _shard_bounds(n, shards)
    if shards == 1 or len(blocks) == 1:
        results = [_certify_block(n, method.value, lo, hi, engine) for lo, hi in blocks]
    else:
        with ProcessPoolExecutor(max_workers=len(blocks)) as pool:
            futures = [pool.submit(_certify_block, n, method.value, lo, hi) for lo, hi in blocks]
            results = [f.result() for f in futures]
    checked = sum(c for c, _ in results)
    witnesses = [w for _, ws in results for w in ws]
    expected = positivity_count(n)
    if checked != expected:
        raise RuntimeError(f"checked {checked} indices, range has {expected}")
    params = {"N": n, "method": method.value, "i": [1, n - 1], "j": [1, 2], "k": "1..i+j"}
    return Certificate.build("positivity", params, checked, witnesses)


def sign_report(n: int, j: int, method: Union[str, Method] = Method.CLOSED_FORM) -> dict[str, object]:
    """Sign census of ``b_(i,j,k)`` for ``1<=i<n``, ``1<=k<=i+j`` at a single ``j``.

    Exploration only: for ``j >= 3`` nothing is claimed.
    """
    engine = CoefficientEngine()
    counts = {"positive": 0, "zero": 0, "negative": 0}
    nonpositive = []
    for k in range(1, n + j):
        for i in range(max(1, k - j), n):
            value = engine.b(TripleIndex(i, j, k), method)
            sign = rat_sign(value)
            counts[("zero", "positive", "negative")[sign]] += 1
            if sign <= 0:
                nonpositive.append({"i": i, "j": j, "k": k, "value": to_str(value)})
    nonpositive.sort(key=lambda w: (w["i"], w["k"]))
    return {"N": n, "j": j, "method": Method.parse(method).value, "counts": counts,
            "nonpositive": nonpositive}


# -- identities -----------------------------------------------------------------


@dataclass(frozen=True)
class IdentityBounds:
    agreement_i: int = 10
    agreement_j: int = 6
    vanishing_i: int = 10
    vanishing_j: int = 10
    vanishing_extra: int = 3
    daehee_q: int = 12
    daehee_k: int = 6
    hbern_i: int = 8
    hbern_j: int = 8
    endpoint_i: int = 200
    corlog_k: int = 6
    corlog_q: int = 10
    laurent_k: int = 4
    laurent_span: int = 5
    bernoulli_n: int = 30
    stirling_j: int = 20


Check = Callable[[CoefficientEngine, IdentityBounds, Method], tuple[dict, int, list[Witness]]]


def _agreement(engine, bounds, method):
    cert = engine.cross_validate(bounds.agreement_i, bounds.agreement_j)
    return cert.claim["params"], cert.checked_count, cert.witnesses


def _vanishing(engine, bounds, method):
    witnesses, checked = [], 0
    for i in range(1, bounds.vanishing_i + 1):
        for j in range(0, bounds.vanishing_j + 1):
            for k in range(i + j + 1, i + j + bounds.vanishing_extra + 1):
                idx = TripleIndex(i, j, k)
                checked += 1
                for m in Method:
                    value = engine.b(idx, m)
                    if value != 0:
                        witnesses.append(Witness(i, j, k, to_str(value), f"{m.value} nonzero"))
    params = {"i_max": bounds.vanishing_i, "j": [0, bounds.vanishing_j],
              "k": f"i+j+1..i+j+{bounds.vanishing_extra}"}
    return params, checked, witnesses


def _daehee(engine, bounds, method):
    witnesses, checked = [], 0
    for k in range(1, bounds.daehee_k + 1):
        for q in range(bounds.daehee_q + 1):
            idx = TripleIndex(q + k, 0, k)
            checked += 1
            d = engine.d(idx, method)
            expected = (-1) ** q * engine.seq.daehee(q, k) / math.factorial(q)
            if d != expected:
                witnesses.append(Witness(*idx, to_str(d), f"expected {to_str(expected)}"))
    return {"q_max": bounds.daehee_q, "k_max": bounds.daehee_k}, checked, witnesses


def _higher_bernoulli(engine, bounds, method):
    witnesses, checked = [], 0
    for i in range(1, bounds.hbern_i + 1):
        for j in range(bounds.hbern_j + 1):
            for k in range(i, i + j + 1):
                idx = TripleIndex(i, j, k)
                checked += 1
                n = i + j - k
                d = engine.d(idx, method)
                expected = (-1) ** (k - i) * engine.seq.higher_bernoulli(n, i) * Fraction(
                    math.factorial(j), math.factorial(n))
                if d != expected:
                    witnesses.append(Witness(i, j, k, to_str(d), f"expected {to_str(expected)}"))
    return {"i_max": bounds.hbern_i, "j_max": bounds.hbern_j, "k": "i..i+j"}, checked, witnesses


def _endpoint(engine, bounds, method):
    witnesses = []
    if method is Method.RECURRENCE:
        engine.b_recurrence(TripleIndex(bounds.endpoint_i, 2, 1))
    for i in range(1, bounds.endpoint_i + 1):
        b = engine.b(TripleIndex(i, 2, 1), method)
        expected = Fraction(i, 2 * (i + 2) * (i + 1))
        if b != expected:
            witnesses.append(Witness(i, 2, 1, to_str(b), f"expected {to_str(expected)}"))
    return {"i_max": bounds.endpoint_i}, bounds.endpoint_i, witnesses


def _cor_log(engine, bounds, method):
    witnesses, checked = [], 0
    for k in range(1, bounds.corlog_k + 1):
        for q in range(bounds.corlog_q + 1):
            idx = TripleIndex(q + k, 0, k)
            checked += 1
            d = engine.d(idx, method)
            main = engine.seq.harmonic_product_sum(k, q)
            oracle = harmonic_product_sum_oracle(k, q)
            if not d == main == oracle:
                witnesses.append(Witness(*idx, to_str(d),
                                         f"series {to_str(main)}, enumeration {to_str(oracle)}"))
    return {"k_max": bounds.corlog_k, "q_max": bounds.corlog_q}, checked, witnesses


def laurent_numerator(k: int, constants: Sequence[Fraction], order: int) -> PowerSeries:
    """``f_k(1-e^t) - sum_r constants[r] (1-e^t)^r`` to ``order``, with
    ``f_k(s) = (-log(1-s)/s)^k``."""
    inner = gen_series("one_minus_exp", order)
    numerator = ps_compose(ps_pow(gen_series("neg_log_one_minus_over_s", order), k), inner)
    power = one(order)
    for c in constants:
        numerator = numerator - power * c
        power = ps_mul(power, inner)
    return numerator


def series_valuation(a: PowerSeries) -> int:
    """Valuation, or ``order + 1`` for a series that vanishes to its order."""
    try:
        return valuation_split(a).valuation
    except SeriesValuationError:
        return a.order + 1


def laurent_valuation(engine: CoefficientEngine, i: int, k: int,
                      method: Union[str, Method] = Method.RECURRENCE, extra: int = 2) -> int:
    """Valuation of the numerator above with ``constants = d_(k..i-1, 0, k)``.

    It is at least ``i - k`` exactly when the subtracted constants match the
    coefficients of ``f_k``, so that dividing by ``(1-e^t)^(i-k)`` leaves no
    negative powers.
    """
    constants = [engine.d(TripleIndex(r + k, 0, k), method) for r in range(i - k)]
    return series_valuation(laurent_numerator(k, constants, i - k + extra))


def _laurent(engine, bounds, method):
    witnesses, checked = [], 0
    for k in range(1, bounds.laurent_k + 1):
        for i in range(k + 1, k + bounds.laurent_span + 1):
            checked += 1
            v = laurent_valuation(engine, i, k, method)
            if v < i - k:
                witnesses.append(Witness(i, 0, k, None, f"valuation {v} < {i - k}"))
    return {"k_max": bounds.laurent_k, "i": f"k+1..k+{bounds.laurent_span}"}, checked, witnesses


def _bernoulli(engine, bounds, method):
    witnesses, checked = [], 0
    n_max = bounds.bernoulli_n
    seq = engine.seq
    for n in range(n_max + 1):
        checked += 1
        value = seq.bernoulli(n)
        oracle = bernoulli_oracle(n)
        if value != oracle:
            witnesses.append(Witness(n, 0, 0, to_str(value), f"oracle gives {to_str(oracle)}"))
        elif n >= 3 and n % 2 and value != 0:
            witnesses.append(Witness(n, 0, 0, to_str(value), "odd Bernoulli number nonzero"))
    # t/(e^t-1) * (e^t-1)/t == 1
    product = ps_shift(ps_mul(seq.bernoulli_egf(n_max), gen_series("exp_minus_one", n_max)), -1)
    checked += 1
    if any(product.coeffs[1:]) or product[0] != 1:
        witnesses.append(Witness(n_max, 0, 0, None, "B(t) (e^t-1)/t != 1"))
    return {"n_max": n_max}, checked, witnesses


def _stirling(engine, bounds, method):
    witnesses, checked = [], 0
    for j in range(bounds.stirling_j + 1):
        for p in range(j + 1):
            checked += 1
            a, b = engine.seq.stirling2(j, p), stirling2_genfunc(j, p)
            if a != b:
                witnesses.append(Witness(j, p, 0, str(a), f"generating function gives {b}"))
    return {"j_max": bounds.stirling_j}, checked, witnesses


IDENTITIES: dict[str, Check] = {
    "agreement": _agreement,
    "vanishing": _vanishing,
    "daehee": _daehee,
    "higher_bernoulli": _higher_bernoulli,
    "endpoint": _endpoint,
    "cor_log": _cor_log,
    "laurent": _laurent,
    "bernoulli": _bernoulli,
    "stirling2": _stirling,
}


def check_identity(name: str, bounds: IdentityBounds | None = None,
                   method: Union[str, Method] = Method.RECURRENCE,
                   engine: CoefficientEngine | None = None) -> Certificate:
    try:
        check = IDENTITIES[name]
    except KeyError:
        raise ValueError(f"unknown identity {name!r}; choose from {sorted(IDENTITIES)}") from None
    bounds = bounds or IdentityBounds()
    method = Method.parse(method)
    engine = engine or CoefficientEngine()
    params, checked, witnesses = check(engine, bounds, method)
    params = {**params, "method": method.value}
    return Certificate.build(name, params, checked, witnesses)


def verify_identities(bounds: IdentityBounds | None = None, names: Optional[list[str]] = None,
                      method: Union[str, Method] = Method.RECURRENCE, shards: int = 1,
                      engine: CoefficientEngine | None = None) -> Certificate:
    """Run the selected identities (all by default) and aggregate.

    ``method`` selects which coefficient route is checked against each
    identity.  The recurrence is the default because the closed form is built
    from the same harmonic sums some identities compare against.
    """
    bounds = bounds or IdentityBounds()
    names = list(names or IDENTITIES)
    method = Method.parse(method)
    if shards > 1 and engine is None:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            futures = [pool.submit(check_identity, name, bounds, method) for name in names]
            parts = [f.result() for f in futures]
    else:
        engine = engine or CoefficientEngine()
        parts = [check_identity(name, bounds, method, engine) for name in names]
    witnesses = [
        Witness(w.i, w.j, w.k, w.value, f"[{part.claim['property']}] {w.reason}")
        for part in parts for w in part.witnesses
    ]
    summary = [
        {"property": p.claim["property"], "params": p.claim["params"], "verdict": p.verdict,
         "checked_count": p.checked_count}
        for p in parts
    ]
    params = {"method": method.value, "bounds": asdict(bounds), "identities": summary}
    return Certificate.build("identities", params, sum(p.checked_count for p in parts), witnesses)


def write_certificate(cert: Certificate, directory: Union[str, Path], stem: str) -> Path:
    """Write ``<stem>.json`` into ``directory`` without overwriting earlier files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    n = 0
    while True:
        path = directory / (f"{stem}.json" if n == 0 else f"{stem}.{n}.json")
        n += 1
        # exclusive create keeps the directory append-only even under races
        try:
            with open(path, "x", encoding="utf-8") as fh:
                fh.write(cert.to_json() + "\n")
        except FileExistsError:
            continue
        return path


def default_shards() -> int:
    return int(os.environ.get("FANOCOEFF_SHARDS", "1"))
