import itertools
import random
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from known_values import EHRHART, RELATIVE_VOLUME
from birkhoff import fastcount
from birkhoff.ehrhart import (
    CountTable,
    EhrhartPoly,
    SumVector,
    binomial,
    count_2x2,
    count_contingency,
    ehrhart_polynomial,
    eval_monomial,
    evaluate,
    interpolate_with_symmetry,
    magic_count,
    multiplicity,
    solve_coefficients,
    sorted_tuples,
)
from birkhoff.matrix import UsageError
from birkhoff.triangulate import birkhoff, relative_volume


def margins(max_len=4, max_total=6):
    for total in range(max_total + 1):
        for m in range(1, max_len + 1):
            for r in oracles.compositions(total, (total,) * m):
                yield r


# ---------------------------------------------------------------- small helpers


def test_sum_vector():
    v = SumVector((3, 0, 2))
    assert v.total == 5 and len(v) == 3
    assert v.normalized().entries == (0, 2, 3)
    with pytest.raises(UsageError):
        SumVector((1, -1))


def test_multiplicity_examples():
    assert multiplicity((2, 2, 2)) == 1
    assert multiplicity((0, 1, 1)) == 3
    assert multiplicity((1, 2, 3, 4)) == 24


@settings(max_examples=100)
@given(st.lists(st.integers(0, 3), max_size=6))
def test_multiplicity_counts_distinct_permutations(y):
    assert multiplicity(y) == len(set(itertools.permutations(y)))


def test_sorted_tuples_are_weakly_increasing_and_complete():
    got = list(sorted_tuples(3, 4, 3))
    want = sorted({tuple(sorted(r)) for r in oracles.compositions(4, (3, 3, 3))})
    assert sorted(got) == want


def test_count_2x2_examples():
    assert count_2x2((3, 2), (4, 1)) == 2
    assert count_2x2((0, 0), (0, 0)) == 1
    assert count_2x2((5, 5), (5, 5)) == 6
    assert count_2x2((1, 1), (1, 2)) == 0


def test_count_2x2_matches_enumeration():
    for x in itertools.product(range(5), repeat=2):
        for y in itertools.product(range(5), repeat=2):
            assert count_2x2(x, y) == oracles.count_tables(x, y)


# ---------------------------------------------------------------- contingency tables


def test_count_contingency_examples():
    assert count_contingency((1, 1, 1), (1, 1, 1)) == 6
    assert count_contingency((2, 2), (2, 2)) == 3
    assert count_contingency((7,), (7,)) == 1
    assert count_contingency((1, 3), (4,)) == 1
    assert count_contingency((1, 2), (2,)) == 0


def test_count_contingency_matches_brute_force():
    seen = 0
    pairs = {}
    for r in margins():
        for c in margins():
            if sum(r) == sum(c) and len(r) <= 4 and len(c) <= 4:
                pairs[r, c] = None
    for r, c in pairs:
        assert count_contingency(r, c) == oracles.count_tables(r, c), (r, c)
        seen += 1
    assert seen > 1000


def test_count_contingency_matches_brute_force_4x4():
    rng = random.Random(1)
    for _ in range(60):
        total = rng.randint(0, 6)
        r = random_comp(rng, total, 4)
        c = random_comp(rng, total, 4)
        assert count_contingency(r, c) == oracles.count_tables(r, c)


def random_comp(rng, total, m):
    cuts = sorted(rng.randint(0, total) for _ in range(m - 1))
    return tuple(b - a for a, b in zip([0] + cuts, cuts + [total]))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_count_contingency_symmetries(data):
    m = data.draw(st.integers(1, 5))
    k = data.draw(st.integers(1, 5))
    total = data.draw(st.integers(0, 8))
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    r, c = random_comp(rng, total, m), random_comp(rng, total, k)
    v = count_contingency(r, c)
    assert count_contingency(c, r) == v
    assert count_contingency(sorted(r), sorted(c, reverse=True)) == v
    assert count_contingency(r + (0,), c) == v


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_split_point_independence(data):
    m = data.draw(st.integers(3, 6))
    total = data.draw(st.integers(0, 9))
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    r, c = random_comp(rng, total, m), random_comp(rng, total, data.draw(st.integers(1, 5)))
    a = count_contingency(r, c, split=1, memo=False)
    b = count_contingency(r, c, split=m // 2)
    assert a == b == count_contingency(r, c)


def test_bad_split_rejected():
    with pytest.raises(UsageError):
        count_contingency((1, 1), (1, 1), split=2)


def test_count_table_normalizes_keys():
    table = CountTable()
    assert table[(2, 1), (1, 2)] == table[(1, 2), (2, 1)] == 2
    assert len(table) == 1


# ---------------------------------------------------------------- magic squares


def test_magic_count_examples():
    for n in range(1, 7):
        assert magic_count(n, 1) == factorial(n)
    assert magic_count(3, 2) == 21
    assert magic_count(4, 3) == 2008
    assert magic_count(5, 0) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_magic_count_matches_brute_force(n):
    for t in range(5):
        assert magic_count(n, t) == oracles.count_magic(n, t)


def test_magic_count_equals_contingency_count():
    for n in range(1, 5):
        for t in range(5):
            assert magic_count(n, t) == count_contingency((t,) * n, (t,) * n)


def test_magic_count_rejects_bad_input():
    with pytest.raises(UsageError):
        magic_count(9, 1)
    with pytest.raises(UsageError):
        magic_count(3, -1)


# ---------------------------------------------------------------- the polynomial


def test_binomial_extends_to_negative_arguments():
    for a in range(-6, 7):
        for k in range(6):
            want = Fraction(1)
            for i in range(k):
                want *= Fraction(a - i, i + 1)
            assert binomial(a, k) == want
    assert binomial(3, -1) == 0


def test_basis_is_unitriangular():
    for n in range(1, 8):
        for k in range(comb(n - 1, 2) + 1):
            assert all(
                EhrhartPoly(n, (0,) * k + (1,))(t) == 0 for t in range(k)
            )
            assert EhrhartPoly(n, (0,) * k + (1,))(k) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_known_coefficients(n):
    p = ehrhart_polynomial(n)
    assert p.coeffs == EHRHART[n]
    assert p.coeffs[0] == 1
    assert p.leading == RELATIVE_VOLUME[n]


def test_to_json_and_str():
    p = ehrhart_polynomial(4)
    assert p.to_json() == {
        "n": 4,
        "basis": "C(t+n-1+k, n-1+2k)",
        "coeffs": ["1", "20", "152", "352"],
    }
    assert str(ehrhart_polynomial(3)) == "C(t+2,2) + 3C(t+3,4)"


def test_evaluate_examples():
    e3 = ehrhart_polynomial(3)
    assert evaluate(e3, 0) == 1
    assert evaluate(e3, -1) == 0
    e4 = ehrhart_polynomial(4)
    for t in range(6):
        assert evaluate(e4, -4 - t) == -evaluate(e4, t)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_reciprocity_identities(n):
    p = ehrhart_polynomial(n)
    for t in range(1, n):
        assert p(-t) == 0
    sign = (-1) ** (n - 1)
    for t in range(comb(n, 2) + 1):
        assert p(-n - t) == sign * p(t)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_out_of_sample_values(n):
    p = ehrhart_polynomial(n)
    for t in range(comb(n - 1, 2) + 1, comb(n, 2) + 1):
        assert p(t) == magic_count(n, t)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_symmetric_interpolation_agrees(n):
    p = ehrhart_polynomial(n)
    values = {t: magic_count(n, t) for t in range(comb(n - 1, 2) + 1)}
    mono = interpolate_with_symmetry(n, values)
    assert len(mono) == (n - 1) ** 2 + 1
    for t in range(-2 * n, 2 * n):
        assert eval_monomial(mono, t) == p(t)
    # the top monomial coefficient is the Euclidean volume of A_n
    assert mono[-1] == Fraction(RELATIVE_VOLUME[n], factorial((n - 1) ** 2))


def test_solve_coefficients_round_trip():
    p = EhrhartPoly(4, (1, 20, 152, 352))
    assert solve_coefficients(4, [p(t) for t in range(4)]) == p.coeffs


@pytest.mark.parametrize("n", [3, 4, 5])
def test_leading_coefficient_is_relative_volume(n):
    assert ehrhart_polynomial(n).leading == relative_volume(birkhoff(n))


# ---------------------------------------------------------------- vectorized counter


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_fastcount_matches_reference(n):
    ts = list(range(comb(n, 2) + 1))
    assert fastcount.magic_counts(n, ts) == [magic_count(n, t) for t in ts]


def test_fastcount_polynomial():
    assert ehrhart_polynomial(6, counter=fastcount.magic_counts).coeffs == EHRHART[6]


@pytest.mark.slow
def test_fastcount_n7():
    assert ehrhart_polynomial(7, counter=fastcount.magic_counts).coeffs == EHRHART[7]
