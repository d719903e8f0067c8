"""Spectral gap of regular tournaments and the checks built on it.

``lambda(T)`` is the largest modulus among adjacency eigenvalues other than
the Perron value ``(n-1)/2``.  Two independent routes compute it:

* :func:`lambda_circulant` sums additive characters over a difference set,
  for tournaments whose edges are ``x -> y iff x - y in S`` on Z_n;
* :func:`lambda_general` diagonalizes the symmetric matrix ``M M^T`` with
  cyclic Jacobi.  For a normal matrix the eigenvalues of ``M M^T`` are the
  squared eigenvalue moduli of ``M``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Tournament, is_normal, is_regular, rng_from_seed
from .jacobi import jacobi_eigenvalues

JACOBI_MAX_N = 128


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    """Non-Perron eigenvalue moduli of a regular tournament."""

    n: int
    top: float
    magnitudes: tuple[float, ...]
    method: str = "circulant"
    eigenvalues: Optional[tuple[complex, ...]] = field(default=None, compare=False)

    @property
    def lam(self) -> float:
        return max(self.magnitudes, default=0.0)

    def square_sum(self) -> float:
        """Sum of squared moduli over all ``n`` eigenvalues, Perron included."""
        return math.fsum([self.top**2, *(m * m for m in self.magnitudes)])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "top": self.top,
            "lambda": self.lam,
            "magnitudes": sorted(self.magnitudes, reverse=True),
            "method": self.method,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Spectrum":
        return cls(int(d["n"]), float(d["top"]), tuple(float(m) for m in d["magnitudes"]),
                   d.get("method", "circulant"))


def lambda_lower_bound(n: int) -> float:
    """Smallest possible spectral gap of a regular tournament on ``n`` vertices."""
    return math.sqrt(n + 1) / 2


def lambda_circulant(S, n: int) -> Spectrum:
    """Eigenvalues ``sum_{s in S} exp(2 pi i k s / n)`` for ``k = 0..n-1``.

    Angles are reduced exactly as integers ``k s mod n`` before the lookup,
    and each sum is accumulated with ``math.fsum``.
    """
    S = sorted({int(s) % n for s in S})
    neg = {(-s) % n for s in S}
    if 0 in S or neg & set(S) or len(S) + len(neg) != n - 1:
        raise SpectralError("S must contain exactly one of s, -s for every nonzero residue")
    angles = 2 * np.pi * np.arange(n) / n
    cos_t, sin_t = np.cos(angles), np.sin(angles)
    s_arr = np.array(S, dtype=np.int64)
    eig = []
    for k in range(n):
        idx = (k * s_arr) % n
        eig.append(complex(math.fsum(cos_t[idx]), math.fsum(sin_t[idx])))
    top = float(len(S))
    eig[0] = complex(top, 0.0)
    mags = tuple(abs(z) for z in eig[1:])
    return Spectrum(n, top, mags, "circulant", tuple(eig))


def _check_regular_normal(t: Tournament) -> None:
    if not is_regular(t):
        raise SpectralError("tournament is not regular")
    if not is_normal(t):
        raise SpectralError("tournament is not normal")


def lambda_general(t: Tournament, method: str = "auto", tol: float = 1e-10,
                   max_sweeps: int = 100) -> Spectrum:
    """Spectrum of a regular (hence normal) tournament from ``M M^T``.

    ``method`` is ``"jacobi"``, ``"eigh"`` (LAPACK) or ``"auto"``, which uses
    Jacobi up to ``JACOBI_MAX_N`` vertices.  One eigenvalue closest to ``d^2``
    is removed as the all-ones direction.
    """
    _check_regular_normal(t)
    n = t.n
    d = (n - 1) / 2
    m = t.to_matrix(dtype=float)
    mmt = m @ m.T
    if method == "auto":
        method = "jacobi" if n <= JACOBI_MAX_N else "eigh"
    if method == "jacobi":
        vals = jacobi_eigenvalues(mmt, tol=tol, max_sweeps=max_sweeps)
    elif method == "eigh":
        vals = np.linalg.eigvalsh(mmt)
    else:
        raise ValueError(f"unknown method {method!r}")
    vals = list(vals)
    del vals[int(np.argmin([abs(v - d * d) for v in vals]))]
    mags = tuple(math.sqrt(max(v, 0.0)) for v in vals)
    return Spectrum(n, d, mags, method)


def spectrum_of(t: Tournament, spec: Optional[dict] = None, method: str = "auto") -> Spectrum:
    """Pick the character-sum route when ``spec`` names a difference set."""
    if spec is not None and "S" in spec and spec.get("family") in ("paley", "cyclotomic"):
        return lambda_circulant(spec["S"], t.n)
    return lambda_general(t, method=method)


def check_spectrum(spec: Spectrum, rel_tol: float = 1e-6, abs_slack: float = 1e-9) -> list[str]:
    """Lower-bound and trace-identity checks; returns a list of failures."""
    problems = []
    n = spec.n
    nd = n * (n - 1) / 2
    if n >= 3 and spec.lam < lambda_lower_bound(n) - abs_slack:
        problems.append(f"lambda {spec.lam} below sqrt(n+1)/2 = {lambda_lower_bound(n)}")
    if abs(spec.square_sum() - nd) > rel_tol * nd:
        problems.append(f"square sum {spec.square_sum()} differs from n*d = {nd}")
    return problems


@dataclass
class MixingAudit:
    mode: str
    pairs_checked: int
    violations: int
    max_ratio_mixing: float
    max_ratio_antisymmetric: float
    first_violation: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "pairs_checked": self.pairs_checked,
            "violations": self.violations,
            "max_ratio_mixing": self.max_ratio_mixing,
            "max_ratio_antisymmetric": self.max_ratio_antisymmetric,
            "first_violation": self.first_violation,
            "ok": self.ok,
        }


def _exhaustive_assignments(n: int, chunk: int):
    """Yield 0/1/2 label arrays covering all 3^n assignments (0 = neither)."""
    total = 3**n
    powers = 3 ** np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield (codes[:, None] // powers[None, :]) % 3


def _sampled_assignments(n: int, trials: int, seed, chunk: int):
    """Random disjoint pairs: sizes uniform on 1..n//2, then a uniform
    random permutation supplies A (first |A|) and B (next |B|)."""
    rng = rng_from_seed(seed)
    half = max(n // 2, 1)
    done = 0
    while done < trials:
        k = min(chunk, trials - done)
        sa = rng.integers(1, half + 1, size=k)
        sb = rng.integers(1, half + 1, size=k)
        perm = rng.permuted(np.tile(np.arange(n), (k, 1)), axis=1)
        pos = np.empty_like(perm)
        np.put_along_axis(pos, perm, np.arange(n)[None, :].repeat(k, 0), axis=1)
        labels = np.zeros((k, n), dtype=np.int64)
        labels[pos < sa[:, None]] = 1
        labels[(pos >= sa[:, None]) & (pos < (sa + sb)[:, None])] = 2
        done += k
        yield labels


def mixing_audit(t: Tournament, spectrum: Spectrum, mode: str = "sampled", trials: int = 10_000,
                 seed=0, slack: float = 1e-9, chunk: int = 20_000) -> MixingAudit:
    """Check both mixing inequalities on disjoint vertex-set pairs.

    ``|e(A,B) - d|A||B|/n| <= lambda sqrt(|A||B|)`` and
    ``|e(A,B) - e(B,A)| <= 2 lambda sqrt(|A||B|)``.
    Exhaustive mode enumerates all ordered disjoint pairs (n <= 12).
    """
    _check_regular_normal(t)
    n = t.n
    if mode == "exhaustive":
        if n > 12:
            raise ValueError("exhaustive mixing audit is limited to n <= 12")
        batches = _exhaustive_assignments(n, chunk)
    elif mode == "sampled":
        batches = _sampled_assignments(n, trials, seed, chunk)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    m = t.to_matrix(dtype=float)
    d = (n - 1) / 2
    lam = spectrum.lam
    checked = violations = 0
    r_mix = r_anti = 0.0
    first = None
    for labels in batches:
        xa = (labels == 1).astype(float)
        xb = (labels == 2).astype(float)
        e_ab = np.einsum("ij,ij->i", xa @ m, xb)
        e_ba = np.einsum("ij,ij->i", xb @ m, xa)
        na, nb = xa.sum(1), xb.sum(1)
        root = np.sqrt(na * nb)
        mix = np.abs(e_ab - d / n * na * nb)
        anti = np.abs(e_ab - e_ba)
        bad = (mix > lam * root + slack) | (anti > 2 * lam * root + slack)
        nz = root > 0
        if nz.any():
            r_mix = max(r_mix, float(np.max(mix[nz] / (lam * root[nz]))))
            r_anti = max(r_anti, float(np.max(anti[nz] / (2 * lam * root[nz]))))
        if bad.any():
            violations += int(bad.sum())
            if first is None:
                i = int(np.flatnonzero(bad)[0])
                first = {"A": np.flatnonzero(labels[i] == 1).tolist(),
                         "B": np.flatnonzero(labels[i] == 2).tolist(),
                         "e_ab": int(e_ab[i]), "e_ba": int(e_ba[i])}
        checked += len(labels)
    return MixingAudit(mode, checked, violations, r_mix, r_anti, first)


def _clusters(values, tol: float) -> list[list[float]]:
    out: list[list[float]] = []
    for v in sorted(values):
        if out and abs(v - out[-1][0]) <= tol * max(1.0, abs(out[-1][0])):
            out[-1].append(v)
        else:
            out.append([v])
    return out


def eigenvalue_clusters(eigenvalues, tol: float = 1e-6) -> list[tuple[complex, int]]:
    """Group complex eigenvalues that agree within ``tol``; (value, multiplicity)."""
    groups: list[list[complex]] = []
    for z in sorted(eigenvalues, key=lambda z: (round(z.real, 6), z.imag)):
        for g in groups:
            if abs(z - g[0]) <= tol * max(1.0, abs(g[0])):
                g.append(z)
                break
        else:
            groups.append([z])
    return [(g[0], len(g)) for g in groups]


def detect_spectral_pattern(spectrum: Spectrum, n: Optional[int] = None, tol: float = 1e-6) -> str:
    """Classify as ``"doubly-regular"``, ``"cndr-like"`` or ``"other"``.

    Non-Perron eigenvalues of a regular tournament have real part -1/2, so
    a modulus fixes an eigenvalue up to conjugation and conjugates come in
    pairs.  Four distinct eigenvalues of multiplicity (n-1)/4 therefore show
    up as two modulus clusters of size (n-1)/2 each.
    """
    n = spectrum.n if n is None else n
    mags = spectrum.magnitudes
    if not mags:
        return "other"
    target = lambda_lower_bound(n)
    if all(abs(m - target) <= tol * target for m in mags):
        return "doubly-regular"
    if (n - 1) % 4 == 0:
        clusters = _clusters(mags, tol)
        cndr_lam = (math.sqrt(n) + 1) / 2
        if (len(clusters) == 2 and all(len(c) == (n - 1) // 2 for c in clusters)
                and abs(spectrum.lam - cndr_lam) <= tol * cndr_lam):
            return "cndr-like"
    return "other"


def cyclotomic_bound(p: int, m: int) -> float:
    """Character-sum ceiling ``m sqrt(p) / 2`` on lambda of a cyclotomic tournament."""
    return m * math.sqrt(p) / 2
