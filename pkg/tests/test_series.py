from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanocoeff.coefficients import CoefficientEngine, TripleIndex
from fanocoeff.series import (
    CompositionError,
    PowerSeries,
    SeriesValuationError,
    gen_series,
    monomial,
    one,
    ps_add,
    ps_compose,
    ps_div,
    ps_mul,
    ps_pow,
    ps_shift,
    valuation_split,
    zero,
)
from fanocoeff.verify import laurent_numerator, laurent_valuation, series_valuation

S = PowerSeries.of


def test_mul_truncates_to_min_order():
    b = S([1, F(-1, 2), F(1, 12)])
    assert ps_mul(b, b) == S([1, -1, F(5, 12)])
    assert ps_mul(S([1, 2, 3, 4]), S([1, 1])).order == 1


def test_mul_and_add_identities():
    f = S([3, F(-1, 2), 7, F(2, 9)])
    assert ps_mul(f, one(3)) == f
    assert ps_add(f, zero(3)) == f


def test_div_examples():
    geometric = ps_div(one(4), S([1, 1, 0, 0, 0]))
    assert geometric == S([1, -1, 1, -1, 1])
    # t / (e^t - 1): divide both by t first
    em1 = valuation_split(gen_series("exp_minus_one", 3))
    t = valuation_split(monomial(1, 3))
    assert em1.valuation == t.valuation == 1
    assert ps_div(t.unit_part, em1.unit_part) == S([1, F(-1, 2), F(1, 12)])
    f = S([2, 5, F(1, 3)])
    assert ps_div(f, f) == one(2)


def test_div_zero_constant_term_is_rejected():
    with pytest.raises(SeriesValuationError):
        ps_div(one(3), gen_series("one_minus_exp", 3))


def test_valuation_split_examples():
    v = valuation_split(gen_series("one_minus_exp", 3))
    assert v.valuation == 1
    assert v.unit_part == S([-1, F(-1, 2), F(-1, 6)])
    assert v.unit_part.order == 2
    v = valuation_split(monomial(2, 2))
    assert (v.valuation, v.unit_part) == (2, S([1]))
    v = valuation_split(S([5]))
    assert (v.valuation, v.unit_part) == (0, S([5]))
    with pytest.raises(SeriesValuationError):
        valuation_split(zero(4))


def test_laurent_valued_series():
    t2 = valuation_split(monomial(2, 4))
    u = valuation_split(gen_series("one_minus_exp", 5))
    q = u / t2
    assert q.valuation == -1 and not q.is_power_series
    with pytest.raises(SeriesValuationError):
        q.to_power_series()
    assert (u * t2).to_power_series()[3] == -1


def test_compose_examples():
    f = S([1, 2, 3, 4])
    assert ps_compose(f, monomial(1, 3)) == f
    g = S([0, 1, 5, 2])
    assert ps_compose(S([1, 1, 0, 0]), g) == S([1, 1, 5, 2])
    with pytest.raises(CompositionError):
        ps_compose(f, S([1, 1, 0, 0]))


def test_compose_log_into_one_minus_exp():
    # -log(1-s)/s at s = 1-e^t is -t/(1-e^t) = t/(e^t-1)
    composite = ps_compose(gen_series("neg_log_one_minus_over_s", 6), gen_series("one_minus_exp", 6))
    assert composite[0] == 1
    assert composite[1] == F(-1, 2)
    assert composite == gen_series("bernoulli_egf", 6)


def test_pow_examples():
    f = S([1, F(-1, 2), F(1, 3), F(-1, 4)])
    assert ps_pow(f, 0) == one(3)
    assert ps_pow(f, 1) == f
    assert ps_pow(f, 2).truncate(2) == S([1, -1, F(11, 12)])


def test_generators():
    assert gen_series("neg_log_one_minus_over_s", 3) == S([1, F(1, 2), F(1, 3), F(1, 4)])
    assert gen_series("bernoulli_egf", 2) == S([1, F(-1, 2), F(1, 12)])
    assert gen_series("one_minus_exp", 2) == S([0, -1, F(-1, 2)])
    assert gen_series("log_one_plus_over_t", 3) == S([1, F(-1, 2), F(1, 3), F(-1, 4)])
    with pytest.raises(ValueError):
        gen_series("zeta", 3)


def test_unknown_coefficient_raises():
    f = S([1, 2])
    with pytest.raises(IndexError):
        f[2]
    with pytest.raises(Exception):
        f.truncate(3)


def test_shift():
    f = S([0, 0, 1, 2])
    assert ps_shift(f, -2) == S([1, 2])
    assert ps_shift(S([1, 2]), 2) == f
    with pytest.raises(SeriesValuationError):
        ps_shift(S([1, 2]), -1)


def test_json_dump():
    assert S([1, F(-1, 2), 0]).to_json() == '["1", "-1/2", "0"]'


@pytest.mark.parametrize("n", [1, 5, 20, 40])
def test_bernoulli_times_exp_minus_one(n):
    prod = ps_mul(gen_series("bernoulli_egf", n), gen_series("exp_minus_one", n))
    assert ps_shift(prod, -1) == one(n - 1)


small = st.builds(F, st.integers(-40, 40), st.integers(1, 12))


@st.composite
def series(draw, order=None, unit=False):
    n = order if order is not None else draw(st.integers(0, 6))
    coeffs = draw(st.lists(small, min_size=n + 1, max_size=n + 1))
    if unit and coeffs[0] == 0:
        coeffs[0] = F(1)
    return S(coeffs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6).flatmap(lambda n: st.tuples(series(n), series(n), series(n))))
def test_ring_axioms(abc):
    a, b, c = abc
    assert ps_mul(ps_mul(a, b), c) == ps_mul(a, ps_mul(b, c))
    assert ps_mul(a, ps_add(b, c)) == ps_add(ps_mul(a, b), ps_mul(a, c))
    assert ps_mul(a, b) == ps_mul(b, a)
    assert ps_add(ps_add(a, b), c) == ps_add(a, ps_add(b, c))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6).flatmap(lambda n: st.tuples(series(n), series(n, unit=True))))
def test_div_round_trip(ab):
    a, b = ab
    assert ps_mul(ps_div(a, b), b) == a


@settings(max_examples=30, deadline=None)
@given(series(4), st.integers(0, 5))
def test_pow_is_repeated_mul(f, n):
    expected = one(f.order)
    for _ in range(n):
        expected = ps_mul(expected, f)
    assert ps_pow(f, n) == expected


@settings(max_examples=30, deadline=None)
@given(series(4), series(4))
def test_compose_matches_sum_of_powers(f, g):
    g = S([0] + list(g.coeffs[1:]))
    expected = zero(4)
    for m in range(5):
        expected = ps_add(expected, ps_pow(g, m) * f[m])
    assert ps_compose(f, g) == expected


@pytest.mark.parametrize("k", range(1, 5))
@pytest.mark.parametrize("span", range(1, 6))
def test_laurent_divisibility(k, span):
    engine = CoefficientEngine()
    assert laurent_valuation(engine, k + span, k) >= span


@pytest.mark.parametrize("k", [1, 3])
@pytest.mark.parametrize("bad", [0, 2])
def test_laurent_detects_wrong_constants(k, bad):
    engine = CoefficientEngine()
    span = 4
    constants = [engine.d(TripleIndex(r + k, 0, k), "recurrence") for r in range(span)]
    constants[bad] += F(1, 7)
    # the leading negative term sits at the first wrong constant
    assert series_valuation(laurent_numerator(k, constants, span + 2)) == bad
