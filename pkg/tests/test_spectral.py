import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrt import (
    admissible_ivecs,
    build_cyclotomic,
    build_paley,
    cyclotomic_spec,
    detect_spectral_pattern,
    lambda_circulant,
    lambda_general,
    lambda_lower_bound,
    mixing_audit,
    sample_random_tournament,
    transitive_tournament,
)
from qrt.core import random_regular_tournament
from qrt.elliptic import build_elliptic_from_spec
from qrt.jacobi import ConvergenceError, jacobi_eigenvalues
from qrt.spectral import SpectralError, Spectrum, check_spectrum, eigenvalue_clusters, spectrum_of


def _lambda_dense(t):
    """Third route: nonsymmetric eigensolver on M, Perron value removed."""
    ev = np.linalg.eigvals(t.to_matrix(dtype=float))
    d = (t.n - 1) / 2
    ev = np.delete(ev, np.argmin(np.abs(ev - d)))
    return float(np.max(np.abs(ev)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_jacobi_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    a = a + a.T
    hist = []
    vals = np.sort(jacobi_eigenvalues(a, history=hist))
    assert np.allclose(vals, np.linalg.eigvalsh(a), atol=1e-9)
    assert all(later <= earlier + 1e-12 for earlier, later in zip(hist, hist[1:]))
    assert hist[-1] <= 1e-10


def test_jacobi_rejects_asymmetric_and_nonconvergence():
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
    a = np.random.default_rng(0).normal(size=(8, 8))
    with pytest.raises(ConvergenceError):
        jacobi_eigenvalues(a + a.T, max_sweeps=1)


def test_circulant_examples():
    s3 = lambda_circulant([1], 3)
    assert s3.top == 1 and s3.eigenvalues[0] == 1
    assert s3.magnitudes == pytest.approx((1.0, 1.0), abs=1e-12)
    assert s3.lam == pytest.approx(math.sqrt(4) / 2, abs=1e-12)
    assert lambda_circulant([1, 2, 4], 7).lam == pytest.approx(math.sqrt(2), abs=1e-12)
    with pytest.raises(SpectralError):
        lambda_circulant([1, 6], 7)


def test_general_examples(paley7):
    assert lambda_general(paley7).lam == pytest.approx(math.sqrt(2), abs=1e-8)
    t13 = build_cyclotomic(cyclotomic_spec(13, 4, (0, 1)))
    assert lambda_general(t13).lam == pytest.approx((math.sqrt(13) + 1) / 2, abs=1e-8)
    with pytest.raises(SpectralError):
        lambda_general(transitive_tournament(5))


@pytest.mark.parametrize("p,m", [(7, 2), (11, 2), (13, 4), (29, 4), (19, 6), (31, 6)])
def test_three_routes_agree(p, m):
    for ivec in admissible_ivecs(p, m):
        spec = cyclotomic_spec(p, m, ivec)
        t = build_cyclotomic(spec)
        circ = lambda_circulant(spec.S, p)
        jac = lambda_general(t, method="jacobi")
        assert circ.lam == pytest.approx(jac.lam, abs=1e-8)
        assert circ.lam == pytest.approx(_lambda_dense(t), abs=1e-8)
        assert sorted(circ.magnitudes) == pytest.approx(sorted(jac.magnitudes), abs=1e-7)


def test_trace_and_lower_bound_on_random_regular():
    for seed in range(10):
        t = random_regular_tournament(15, seed)
        sp = lambda_general(t)
        assert check_spectrum(sp) == []
        assert sp.lam >= lambda_lower_bound(15) - 1e-9
        assert sp.lam == pytest.approx(_lambda_dense(t), abs=1e-7)


def test_lower_bound_values():
    assert lambda_lower_bound(3) == 1.0
    assert lambda_lower_bound(7) == pytest.approx(math.sqrt(2))


def test_patterns(paley7):
    assert detect_spectral_pattern(lambda_general(paley7)) == "doubly-regular"
    assert detect_spectral_pattern(lambda_circulant([1, 2, 4], 7)) == "doubly-regular"
    sp13 = lambda_circulant(cyclotomic_spec(13, 4, (0, 1)).S, 13)
    assert detect_spectral_pattern(sp13) == "cndr-like"
    clusters = eigenvalue_clusters(sp13.eigenvalues[1:])
    assert len(clusters) == 4 and all(mult == 3 for _, mult in clusters)
    found_other = False
    for seed in range(5):
        sp = lambda_general(random_regular_tournament(9, seed))
        if detect_spectral_pattern(sp) == "other":
            found_other = True
            break
    assert found_other


def test_mixing_audit_examples(paley7):
    sp = lambda_general(paley7)
    res = mixing_audit(paley7, sp, mode="exhaustive")
    assert res.ok and res.pairs_checked == 3**7
    assert 0 < res.max_ratio_mixing <= 1 + 1e-9
    t19 = build_paley(19)
    res = mixing_audit(t19, lambda_general(t19), mode="sampled", trials=2000, seed=1)
    assert res.ok and res.pairs_checked == 2000
    with pytest.raises(ValueError):
        mixing_audit(t19, lambda_general(t19), mode="exhaustive")


def test_mixing_audit_detects_understated_lambda(paley7):
    fake = Spectrum(7, 3.0, (0.1,) * 6)
    res = mixing_audit(paley7, fake, mode="exhaustive")
    assert not res.ok and res.first_violation is not None


def test_mixing_audit_sampled_sets_are_disjoint_and_sized():
    from qrt.spectral import _sampled_assignments

    for labels in _sampled_assignments(11, 500, 3, 200):
        a = (labels == 1).sum(1)
        b = (labels == 2).sum(1)
        assert (a >= 1).all() and (a <= 5).all() and (b >= 1).all() and (b <= 5).all()


def test_elliptic_spectra_pass_checks():
    for n in (7, 9, 11, 13, 15, 17):
        t, _ = build_elliptic_from_spec({"family": "elliptic", "p": 11, "n": n})
        sp = lambda_general(t)
        assert check_spectrum(sp) == []
        assert sp.lam == pytest.approx(_lambda_dense(t), abs=1e-7)


def test_spectrum_json_roundtrip():
    sp = lambda_circulant([1, 2, 4], 7)
    d = sp.to_dict()
    assert d["magnitudes"] == sorted(d["magnitudes"], reverse=True)
    assert Spectrum.from_dict(d).lam == pytest.approx(sp.lam)


def test_spectrum_of_dispatch(paley7):
    assert spectrum_of(paley7, {"family": "paley", "p": 7, "S": [1, 2, 4]}).method == "circulant"
    assert spectrum_of(paley7).method == "jacobi"
    assert spectrum_of(paley7, method="eigh").lam == pytest.approx(math.sqrt(2))


def test_nonregular_random_rejected():
    t = sample_random_tournament(8, 0)
    with pytest.raises(SpectralError):
        lambda_general(t)
