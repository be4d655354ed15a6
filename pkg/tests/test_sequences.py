import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanocoeff.sequences import (
    SequenceCache,
    bernoulli,
    bernoulli_oracle,
    compositions,
    daehee,
    harmonic_product_sum,
    harmonic_product_sum_oracle,
    higher_bernoulli,
    multinomial,
    stirling2,
    stirling2_genfunc,
)


@pytest.mark.parametrize("n, expected", [(0, F(1)), (1, F(-1, 2)), (2, F(1, 6)), (3, F(0)),
                                         (4, F(-1, 30)), (12, F(-691, 2730))])
def test_bernoulli_values(n, expected):
    assert bernoulli(n) == expected


def test_bernoulli_matches_recurrence_oracle():
    for n in range(31):
        assert bernoulli(n) == bernoulli_oracle(n), n


def test_odd_bernoulli_vanish():
    for m in range(1, 15):
        assert bernoulli(2 * m + 1) == 0


def test_bernoulli_negative_index():
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_higher_bernoulli_values():
    for i in range(1, 6):
        assert higher_bernoulli(0, i) == 1
    assert higher_bernoulli(1, 2) == -1
    for n in range(10):
        assert higher_bernoulli(n, 1) == bernoulli(n)


@pytest.mark.parametrize("i", range(1, 6))
def test_higher_bernoulli_cauchy_refinement(i):
    for n in range(10):
        lhs = higher_bernoulli(n, i + 1) / math.factorial(n)
        rhs = sum(higher_bernoulli(a, i) / math.factorial(a) * bernoulli(n - a) / math.factorial(n - a)
                  for a in range(n + 1))
        assert lhs == rhs


def test_higher_bernoulli_domain():
    with pytest.raises(ValueError):
        higher_bernoulli(2, 0)


def test_daehee_values():
    for k in range(1, 5):
        assert daehee(0, k) == 1
    assert daehee(1, 1) == F(-1, 2)
    assert daehee(2, 1) == F(2, 3)
    # log(1+t)/t = sum (-1)^q t^q/(q+1)
    for q in range(10):
        assert daehee(q, 1) == F((-1) ** q * math.factorial(q), q + 1)


def test_daehee_domain():
    with pytest.raises(ValueError):
        daehee(1, 0)


@pytest.mark.parametrize("j, p, expected", [(1, 1, 1), (2, 1, 1), (2, 2, 1), (1, 0, 0), (2, 0, 0),
                                            (3, 2, 3), (0, 0, 1), (5, 3, 25), (10, 4, 34105)])
def test_stirling2_values(j, p, expected):
    assert stirling2(j, p) == expected


def test_stirling2_two_paths_agree():
    for j in range(21):
        for p in range(j + 1):
            assert stirling2(j, p) == stirling2_genfunc(j, p), (j, p)


def test_stirling2_domain():
    with pytest.raises(ValueError):
        stirling2(2, 3)
    with pytest.raises(ValueError):
        stirling2_genfunc(2, 3)
    with pytest.raises(ValueError):
        stirling2(-1, 0)


def _bell_triangle(n):
    bells, row = [1], [1]
    for _ in range(n):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
        bells.append(row[0])
    return bells


def test_stirling2_row_sums_are_bell_numbers():
    bells = _bell_triangle(20)
    sums = [sum(stirling2(j, p) for p in range(j + 1)) for j in range(21)]
    assert sums == bells
    assert all(a <= b for a, b in zip(sums, sums[1:]))


@pytest.mark.parametrize("k, q, expected", [(2, 1, F(1)), (2, 2, F(11, 12)), (3, 0, F(1))])
def test_harmonic_product_sum_values(k, q, expected):
    assert harmonic_product_sum(k, q) == expected


def test_harmonic_product_sum_k1():
    for q in range(12):
        assert harmonic_product_sum(1, q) == F(1, q + 1)


def test_harmonic_product_sum_matches_enumeration():
    for k in range(1, 7):
        for q in range(9):
            assert harmonic_product_sum(k, q) == harmonic_product_sum_oracle(k, q), (k, q)


def test_harmonic_row_matches_pointwise():
    cache = SequenceCache()
    row = cache.harmonic_row(3, 7)
    assert row == [SequenceCache().harmonic_product_sum(3, q) for q in range(8)]


def test_harmonic_product_sum_domain():
    with pytest.raises(ValueError):
        harmonic_product_sum(0, 1)
    with pytest.raises(ValueError):
        harmonic_product_sum(1, -1)


@pytest.mark.parametrize("n, parts, expected", [(3, [3], 1), (2, [1, 1], 2), (4, [2, 1, 1], 12),
                                                (0, [], 1), (5, [0, 5], 1)])
def test_multinomial_values(n, parts, expected):
    assert multinomial(n, parts) == expected


def test_multinomial_domain():
    with pytest.raises(ValueError):
        multinomial(4, [1, 1])
    with pytest.raises(ValueError):
        multinomial(0, [1, -1])


@given(st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_multinomial_is_product_of_binomials(parts):
    n = sum(parts)
    expected, left = 1, n
    for p in parts:
        expected *= math.comb(left, p)
        left -= p
    assert multinomial(n, parts) == expected


@pytest.mark.parametrize("q, k", [(0, 1), (3, 1), (0, 4), (4, 3), (6, 4)])
def test_compositions_count_and_shape(q, k):
    comps = list(compositions(q, k))
    assert len(comps) == math.comb(q + k - 1, k - 1)
    assert len(set(comps)) == len(comps)
    assert all(len(c) == k and sum(c) == q and min(c) >= 0 for c in comps)


def test_cache_audit():
    cache = SequenceCache()
    for n in range(25):
        cache.bernoulli(n)
    for j in range(15):
        for p in range(j + 1):
            cache.stirling2(j, p)
    for k in range(1, 5):
        cache.harmonic_row(k, 9)
    bern_before = list(cache.bernoulli_table)
    stir_before = [list(r) for r in cache.stirling2_rows]
    harm_before = dict(cache.harmonic_sums)

    # further use must not rewrite entries
    cache.bernoulli(60)
    cache.stirling2(25, 3)
    cache.harmonic_product_sum(5, 12)
    assert cache.bernoulli_table[: len(bern_before)] == bern_before
    assert cache.stirling2_rows[: len(stir_before)] == stir_before
    assert all(cache.harmonic_sums[key] == v for key, v in harm_before.items())

    fresh = SequenceCache()
    assert all(v == bernoulli_oracle(n) for n, v in enumerate(cache.bernoulli_table[:31]))
    assert all(v == fresh.bernoulli(n) for n, v in enumerate(cache.bernoulli_table))
    for j, row in enumerate(cache.stirling2_rows[:21]):
        assert row == [stirling2_genfunc(j, p) for p in range(j + 1)]
    for (k, q), v in cache.harmonic_sums.items():
        assert v == SequenceCache().harmonic_product_sum(k, q)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 8))
def test_harmonic_sum_property(k, q):
    assert SequenceCache().harmonic_product_sum(k, q) == harmonic_product_sum_oracle(k, q)
