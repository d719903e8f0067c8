import json
import math
from itertools import combinations

import pytest

from qrt import (
    CertificateReport,
    CertifyOptions,
    build_cyclotomic,
    build_paley,
    certify,
    cyclotomic_spec,
    graham_spencer_threshold,
    has_schutte,
    is_doubly_regular,
    sample_random_tournament,
    transitive_tournament,
)
from qrt.constructions import build_from_spec
from qrt.core import random_regular_tournament
from qrt.properties import BudgetExceeded, dominators
from qrt.spectral import detect_spectral_pattern, lambda_general


def _schutte_brute(t, k):
    for subset in combinations(range(t.n), k):
        if not any(all(t.has_edge(z, a) for a in subset) for z in range(t.n) if z not in subset):
            return False
    return True


def _colex_key(subset):
    return tuple(sorted(subset, reverse=True))


def test_schutte_examples(three_cycle, paley7):
    assert has_schutte(three_cycle, 1).holds
    res = has_schutte(transitive_tournament(5), 1)
    assert not res.holds and res.witness == [0]
    assert has_schutte(paley7, 2).holds
    assert has_schutte(paley7, 2).checked == 21


@pytest.mark.parametrize("seed", range(30))
def test_schutte_against_brute_force(seed):
    n = 4 + seed % 7
    t = sample_random_tournament(n, seed)
    for k in (1, 2, 3):
        res = has_schutte(t, k)
        assert res.holds == _schutte_brute(t, k)
        if not res.holds:
            assert dominators(t, res.witness) == []
            # colex-first failing subset
            failing = [s for s in combinations(range(n), k)
                       if not any(all(t.has_edge(z, a) for a in s) for z in range(n) if z not in s)]
            assert tuple(res.witness) == min(failing, key=_colex_key)


def test_schutte_monotone():
    for seed in range(20):
        t = random_regular_tournament(11, seed)
        holds = [has_schutte(t, k).holds for k in (1, 2, 3)]
        for j in range(2):
            if holds[j + 1]:
                assert holds[j]


@pytest.mark.parametrize("p", [19, 23, 31, 43, 47])
def test_paley_above_threshold_has_s2(p):
    assert p > graham_spencer_threshold(2)
    assert has_schutte(build_paley(p), 2).holds


def test_schutte_budget():
    with pytest.raises(BudgetExceeded):
        has_schutte(build_paley(47), 5, budget=1000)
    with pytest.raises(ValueError):
        has_schutte(build_paley(7), 7)


def test_graham_spencer():
    assert [graham_spencer_threshold(k) for k in (1, 2, 3)] == [1, 16, 144]


def test_doubly_regular(three_cycle, paley7):
    assert is_doubly_regular(paley7) == (True, 1)
    assert is_doubly_regular(three_cycle) == (True, 0)
    assert not is_doubly_regular(build_cyclotomic(cyclotomic_spec(13, 4, (0, 1))))[0]
    assert not is_doubly_regular(transitive_tournament(7))[0]


@pytest.mark.parametrize("p", [3, 7, 11, 19, 23])
def test_doubly_regular_implies_pattern(p):
    t = build_paley(p)
    assert is_doubly_regular(t)[0]
    sp = lambda_general(t)
    assert detect_spectral_pattern(sp) == "doubly-regular"
    assert sp.lam == pytest.approx(math.sqrt(p + 1) / 2, abs=1e-8)


def test_certify_paley19():
    t, spec = build_from_spec({"family": "paley", "p": 19})
    rep = certify(t, spec)
    assert rep.ok, rep.problems
    assert rep.spectral["lambda"] == pytest.approx(math.sqrt(5), abs=1e-8)
    assert rep.spectral["pattern"] == "doubly-regular"
    assert rep.doubly_regular
    assert rep.ranking["exact"] and rep.ratio_is_lower_bound is False
    assert rep.report_version == 1


def test_certify_transitive9():
    rep = certify(transitive_tournament(9), options=CertifyOptions(exact_cap=0))
    assert rep.spectral is None and rep.spectral_omitted_reason == "not regular"
    assert rep.ranking["value"] == 36 and not rep.ranking["exact"]
    assert rep.ratio_is_lower_bound


def test_certify_json_roundtrip(paley7):
    rep = certify(paley7)
    again = CertificateReport.from_json(rep.to_json())
    assert again == rep
    assert json.loads(again.to_json()) == json.loads(rep.to_json())


def test_certify_deterministic():
    t = build_paley(23)
    opts = CertifyOptions(exact_cap=0, seed=3, audit_trials=500)
    assert certify(t, options=opts).to_json() == certify(t, options=opts).to_json()
