import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrt import (
    Ranking,
    bisection_certificate,
    build_paley,
    consistent_edges,
    exact_max_consistent,
    heuristic_max_consistent,
    reverse_ranking,
    sample_random_tournament,
    theorem_bound,
    transitive_tournament,
    trivial_bounds,
)
from qrt.core import random_ranking, random_regular_tournament
from qrt.ranking import CapExceeded, brute_force_max_consistent
from qrt.spectral import lambda_general


def test_exact_small_cases(three_cycle):
    res = exact_max_consistent(three_cycle)
    assert res.value == 2 and res.exact
    assert consistent_edges(three_cycle, res.best_sigma) == 2
    for n in range(1, 17):
        res = exact_max_consistent(transitive_tournament(n))
        assert res.value == n * (n - 1) // 2
        assert res.best_sigma == Ranking.identity(n)


@pytest.mark.parametrize("seed", range(25))
def test_exact_matches_brute_force(seed):
    n = 3 + seed % 6
    t = sample_random_tournament(n, seed)
    res = exact_max_consistent(t)
    assert res.value == brute_force_max_consistent(t)
    assert consistent_edges(t, res.best_sigma) == res.value
    assert res.value >= math.ceil(trivial_bounds(n)[0])


def test_exact_cap():
    with pytest.raises(CapExceeded):
        exact_max_consistent(sample_random_tournament(21, 0))
    with pytest.raises(CapExceeded):
        exact_max_consistent(sample_random_tournament(12, 0), cap=10)


def test_heuristic_vs_exact():
    equal = 0
    for seed in range(100):
        n = 5 + seed % 8
        t = sample_random_tournament(n, 1000 + seed)
        h = heuristic_max_consistent(t, restarts=3, seed=seed)
        e = exact_max_consistent(t)
        assert h.value <= e.value
        assert consistent_edges(t, h.best_sigma) == h.value
        equal += h.value == e.value
    assert equal >= 80


def test_heuristic_transitive_and_floor():
    t = transitive_tournament(30)
    assert heuristic_max_consistent(t, restarts=1).value == 435
    for seed in range(10):
        t = sample_random_tournament(25, seed)
        h = heuristic_max_consistent(t, restarts=2, seed=seed)
        assert h.value >= 25 * 24 / 4
        assert list(h.history) == sorted(h.history)


def test_heuristic_deterministic():
    t = sample_random_tournament(30, 3)
    assert heuristic_max_consistent(t, 3, 5) == heuristic_max_consistent(t, 3, 5)


def test_trivial_bounds():
    assert trivial_bounds(3) == (1.5, 3)
    assert trivial_bounds(7) == (10.5, 21)


def test_theorem_bound():
    assert theorem_bound(7, math.sqrt(2)) == pytest.approx(10.5 + math.sqrt(2) * 7 * math.log2(14))
    assert theorem_bound(7, math.sqrt(2)) == pytest.approx(48.1909, abs=1e-4)
    assert theorem_bound(9, 0.0) == 18.0
    n = 10007
    excess = theorem_bound(n, math.sqrt(n + 1) / 2) - n * (n - 1) / 4
    assert excess == pytest.approx(7.16e6, rel=0.01)
    assert excess / n**2 < 0.08


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_certificate_identity(n, tseed, rseed):
    t = sample_random_tournament(n, tseed)
    sigma = random_ranking(n, rseed)
    cert = bisection_certificate(t, sigma)
    assert cert.total == consistent_edges(t, sigma) - consistent_edges(t, reverse_ranking(sigma))
    assert 2 ** cert.r >= n and (n <= 1 or 2 ** (cert.r - 1) < n)
    for i, blocks in enumerate(cert.blocks, start=1):
        assert all(len(b) <= 2 ** (cert.r - i) for b in blocks)
        flat = [v for b in blocks for v in b]
        assert flat == sigma.order()
    rev = bisection_certificate(t, reverse_ranking(sigma))
    assert rev.total == -cert.total


def test_certificate_paley19_levels():
    t = build_paley(19)
    sigma = heuristic_max_consistent(t, restarts=2).best_sigma
    lam = math.sqrt(5)
    cert = bisection_certificate(t, sigma, lam)
    assert cert.flagged_levels == []
    assert all(s <= 2 * lam * 2 ** (cert.r - 1) + 1e-9 for s in cert.level_sums)


def test_certificate_flags_understated_lambda():
    t = build_paley(19)
    sigma = heuristic_max_consistent(t, restarts=1).best_sigma
    cert = bisection_certificate(t, sigma, 0.01)
    assert cert.flagged_levels


def test_bound_holds_for_regular():
    for seed in range(5):
        t = random_regular_tournament(13, seed)
        lam = lambda_general(t).lam
        assert exact_max_consistent(t).value <= theorem_bound(13, lam)
