import random

import pytest
from hypothesis import given, settings, strategies as st

from eentropy import (
    EmptyString,
    OrderTooLarge,
    context_stats,
    empirical_entropy_k,
    entropy_profile,
    fit,
    from_text,
    markov,
)
from oracles import hk_bruteforce

from conftest import random_string


def test_context_stats_parity():
    stats = context_stats(from_text("10101010"), 1)
    one, zero = from_text("10101010").alphabet.index(ord("1")), from_text("10101010").alphabet.index(ord("0"))
    assert stats[(one,)].successor_counts[zero] == 4
    assert stats[(one,)].total == 4
    assert stats[(zero,)].successor_counts[one] == 3
    assert stats[(zero,)].total == 3
    assert stats.total_followed == 7


def test_context_stats_k0_and_k_equals_n():
    s = context_stats(from_text("aaaa"), 0)
    assert list(s.tables) == [()]
    assert s[()].successor_counts == (4,)
    assert context_stats(from_text("ab"), 2).total_followed == 0
    with pytest.raises(OrderTooLarge):
        context_stats(from_text("ab"), 3)


@pytest.mark.parametrize(
    "text,k,expected",
    [
        ("10101010", 0, 1.0),
        ("10101010", 1, 0.0),
        ("aab", 0, 0.9182958340544894),  # (2 log(3/2) + log 3) / 3
    ],
)
def test_hk_examples(text, k, expected):
    assert empirical_entropy_k(from_text(text), k) == pytest.approx(expected, abs=1e-12)


def test_hk_errors():
    with pytest.raises(EmptyString):
        empirical_entropy_k(from_text(""), 0)
    with pytest.raises(OrderTooLarge):
        empirical_entropy_k(from_text("ab"), 3)


@pytest.mark.parametrize(
    "text,k_max,expected",
    [
        ("10101010", 1, [(0, 1.0), (1, 0.0)]),
        ("aaaa", 2, [(0, 0.0), (1, 0.0), (2, 0.0)]),
        ("ab", 2, [(0, 1.0), (1, 0.0), (2, 0.0)]),
    ],
)
def test_entropy_profile(text, k_max, expected):
    assert entropy_profile(from_text(text), k_max) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda a: st.tuples(st.just(a), st.lists(st.integers(0, a - 1), min_size=1, max_size=64))),
       st.integers(0, 3))
def test_hk_matches_bruteforce(sized, k):
    size, data = sized
    letters = "abcd"[:size]
    text = "".join(letters[i] for i in data)
    if k > len(text):
        return
    x = from_text(text)
    assert empirical_entropy_k(x, k) == pytest.approx(hk_bruteforce(text, k, letters), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=80), st.integers(0, 4))
def test_hk_bounds(data, k):
    text = "".join("abcd"[i] for i in data)
    if k > len(text):
        return
    x = from_text(text)
    import math
    assert 0.0 <= empirical_entropy_k(x, k) <= math.log2(x.alphabet.size) + 1e-12


def test_uniform_counts_give_log_sigma():
    assert empirical_entropy_k(from_text("abcdabcd"), 0) == pytest.approx(2.0, abs=1e-15)
    assert empirical_entropy_k(from_text("zzzzzz"), 0) == 0.0


def test_n_hk_equals_markov_nll():
    rng = random.Random(7)
    for _ in range(50):
        x = random_string(rng, rng.randrange(5, 60), rng.randrange(1, 4))
        for k in range(1, 4):
            if k >= x.n:
                continue
            model = fit(x, markov(k))
            assert x.n * empirical_entropy_k(x, k) == pytest.approx(model.nll_bits, abs=1e-9)
