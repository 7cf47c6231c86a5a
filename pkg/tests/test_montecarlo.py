import json
from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from known_values import RELATIVE_VOLUME
from birkhoff.matrix import UsageError
from birkhoff.montecarlo import (
    SampleReport,
    estimate_alpha,
    exact_alpha,
    in_A,
    is_in_A,
    sample_row_stochastic,
    simplex_product_volume,
)


def test_samples_lie_in_product_of_simplices():
    rng = np.random.default_rng(0)
    for n in range(2, 7):
        x = sample_row_stochastic(n, rng, 1000)
        assert x.shape == (1000, n - 1, n - 1)
        assert (x >= 0).all() and (x.sum(axis=-1) <= 1 + 1e-12).all()
    one = sample_row_stochastic(2, rng)
    assert one.shape == (1, 1) and 0 <= one[0, 0] <= 1
    with pytest.raises(UsageError):
        sample_row_stochastic(1, rng)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_entry_means_are_one_over_n(n):
    # each entry of a uniform point of the solid simplex in R^(n-1) has mean 1/n
    x = sample_row_stochastic(n, np.random.default_rng(n), 100_000)
    mean = x.mean(axis=0)
    se = x.std(axis=0) / np.sqrt(len(x))
    assert (np.abs(mean - 1 / n) <= 5 * se).all()


def test_row_sums_are_uniform_simplex_volume():
    # P(row sum <= s) = s^(n-1) for a uniform point of the solid simplex
    n = 4
    s = sample_row_stochastic(n, np.random.default_rng(3), 100_000).sum(axis=-1).ravel()
    p = (s <= 0.5).mean()
    assert abs(p - 0.5 ** (n - 1)) <= 5 * np.sqrt(p * (1 - p) / len(s))


def test_is_in_A_examples():
    for n in range(2, 9):
        assert is_in_A(np.full((n - 1, n - 1), 1 / n), n)
    m = np.array([[0.6, 0.0], [0.5, 0.0]])
    assert not is_in_A(m, 3)
    assert is_in_A(np.array([[0.0]]), 2) and is_in_A(np.array([[1.0]]), 2)
    # total below n - 2
    assert not is_in_A(np.array([[0.3, 0.0], [0.0, 0.3]]), 3)
    with pytest.raises(UsageError):
        is_in_A(np.zeros((2, 2)), 4)


def test_in_A_vectorized_matches_scalar():
    rng = np.random.default_rng(9)
    x = sample_row_stochastic(4, rng, 500)
    assert list(in_A(x, 4)) == [is_in_A(m, 4) for m in x]


def test_n2_always_hits():
    rep = estimate_alpha(2, 1000, seed=5)
    assert rep.hits == 1000 and rep.alpha_hat == 1 and rep.stderr == 0


@pytest.mark.parametrize("n, trials", [(3, 100_000), (4, 200_000)])
def test_estimate_near_exact(n, trials):
    rep = estimate_alpha(n, trials, seed=1)
    exact = exact_alpha(n, RELATIVE_VOLUME[n])
    assert abs(rep.hits / rep.trials - exact) <= 5 * rep.stderr


def test_reproducible_and_thread_independent():
    a = estimate_alpha(4, 50_000, seed=42, partitions=4)
    b = estimate_alpha(4, 50_000, seed=42, partitions=4, threads=3)
    assert a == b
    assert estimate_alpha(4, 50_000, seed=43, partitions=4) != a


def test_partitions_split_trials():
    rep = estimate_alpha(3, 10, seed=0, partitions=4)
    assert rep.trials == 10 and 0 <= rep.hits <= 10
    rep = estimate_alpha(3, 3, seed=0, partitions=8)
    assert rep.trials == 3


def test_bad_arguments():
    with pytest.raises(UsageError):
        estimate_alpha(3, 0)
    with pytest.raises(UsageError):
        estimate_alpha(3, 10, partitions=0)


def test_report_json():
    rep = SampleReport(3, 100, 40, 7, 1)
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["hits"] == 40 and doc["alpha_hat"] == 0.4 and doc["seed"] == 7
    assert doc["stderr"] == pytest.approx((0.4 * 0.6 / 100) ** 0.5)
    assert rep.alpha_hat == Fraction(2, 5)


def test_exact_alpha_examples():
    assert exact_alpha(2, 1) == 1
    assert exact_alpha(3, 3) == Fraction(1, 2)
    assert exact_alpha(4, 352) == Fraction(22, 105)


@settings(max_examples=50)
@given(st.integers(2, 8), st.integers(1, 10**30))
def test_exact_alpha_identity(n, relvol):
    a = exact_alpha(n, relvol)
    assert a * simplex_product_volume(n) * factorial((n - 1) ** 2) == relvol
