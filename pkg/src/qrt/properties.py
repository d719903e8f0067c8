"""Schütte's property, double regularity and the certification report."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .core import Tournament, common_out_counts, is_normal, is_regular
from .io import content_hash
from .ranking import (
    DP_CAP,
    bisection_certificate,
    exact_max_consistent,
    heuristic_max_consistent,
    theorem_bound,
    trivial_bounds,
)
from .spectral import (
    check_spectrum,
    detect_spectral_pattern,
    lambda_lower_bound,
    mixing_audit,
    spectrum_of,
)

REPORT_VERSION = 1
SCHUTTE_BUDGET = 10**8


class BudgetExceeded(ValueError):
    pass


@dataclass
class SchutteResult:
    k: int
    holds: bool
    witness: Optional[list[int]]
    checked: int

    def to_dict(self) -> dict:
        return asdict(self)


def has_schutte(t: Tournament, k: int, budget: int = SCHUTTE_BUDGET) -> SchutteResult:
    """Does every k-subset have an outside vertex beating all of it?

    Subsets are visited in colexicographic order.  A running AND of
    in-neighbour masks is kept along the way; once it is empty every
    completion fails, and the colex-first completion is returned as witness.
    """
    n = t.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}")
    if math.comb(n, k) > budget:
        raise BudgetExceeded(f"C({n},{k}) = {math.comb(n, k)} exceeds budget {budget}")
    in_rows = t.in_rows
    full = (1 << n) - 1
    checked = 0

    # chosen holds elements in decreasing order; the next one must be smaller
    def search(chosen: list[int], common: int, remaining: int, below: int):
        nonlocal checked
        if remaining == 0:
            checked += 1
            return None
        for c in range(remaining - 1, below):
            acc = common & in_rows[c]
            if acc == 0:
                checked += 1
                return sorted(chosen + [c] + list(range(remaining - 1)))
            found = search(chosen + [c], acc, remaining - 1, c)
            if found is not None:
                return found
        return None

    witness = search([], full, k, n)
    return SchutteResult(k, witness is None, witness, checked)


def dominators(t: Tournament, subset) -> list[int]:
    """Vertices outside ``subset`` with an edge into every member (scalar loop)."""
    subset = set(subset)
    return [z for z in range(t.n)
            if z not in subset and all(t.has_edge(z, a) for a in subset)]


def graham_spencer_threshold(k: int) -> int:
    """Paley tournaments on more than ``k^2 4^(k-1)`` vertices have property S_k."""
    if k < 1:
        raise ValueError("k must be positive")
    return k * k * 2 ** (2 * k - 2)


def is_doubly_regular(t: Tournament) -> tuple[bool, Optional[int]]:
    """Return ``(flag, common out-neighbour count)``; the count is ``None``
    when pairs disagree."""
    n = t.n
    counts = common_out_counts(t)
    off = counts[~np.eye(n, dtype=bool)]
    common = int(off[0]) if off.size and (off == off[0]).all() else None
    if n == 1:
        common = 0
    flag = (is_regular(t) and n % 4 == 3 and common is not None
            and common == (n - 3) // 4)
    return flag, common


@dataclass
class CertifyOptions:
    exact_cap: int = DP_CAP
    force_exact: bool = False
    restarts: int = 4
    seed: int = 0
    schutte_k: tuple[int, ...] = (1, 2)
    schutte_budget: int = SCHUTTE_BUDGET
    audit_mode: str = "auto"
    audit_trials: int = 10_000
    pattern_tol: float = 1e-6
    spectral_method: str = "auto"


@dataclass
class CertificateReport:
    n: int
    construction: Optional[dict]
    content_hash: str
    regular: bool
    normal: bool
    spectral: Optional[dict]
    spectral_omitted_reason: Optional[str]
    trivial_bounds: list
    ranking: dict
    quasi_random_ratio: float
    ratio_is_lower_bound: bool
    doubly_regular: bool
    common_out_neighbours: Optional[int]
    schutte: list = field(default_factory=list)
    mixing_audit: Optional[dict] = None
    certificate: Optional[dict] = None
    problems: list = field(default_factory=list)
    report_version: int = REPORT_VERSION

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "CertificateReport":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "CertificateReport":
        return cls.from_dict(json.loads(text))


def certify(t: Tournament, spec: Optional[dict] = None,
            options: Optional[CertifyOptions] = None) -> CertificateReport:
    """Run every diagnostic on ``t`` and collect the results.

    Spectral fields need a regular (hence normal) tournament and are left
    out with a reason otherwise.  Invariant failures (trace identity, lower
    bound, mixing violations, flagged bisection levels) land in ``problems``.
    """
    opt = options or CertifyOptions()
    n = t.n
    regular = is_regular(t)
    normal = is_normal(t)
    problems = []

    spectral = reason = audit = None
    spectrum = None
    if regular and normal:
        spectrum = spectrum_of(t, spec, method=opt.spectral_method)
        problems += check_spectrum(spectrum)
        lam = spectrum.lam
        spectral = {
            "lambda": lam,
            "method": spectrum.method,
            "lower_bound": lambda_lower_bound(n),
            "theorem_bound": theorem_bound(n, lam),
            "pattern": detect_spectral_pattern(spectrum, n, opt.pattern_tol),
            "square_sum": spectrum.square_sum(),
            "magnitudes": sorted(spectrum.magnitudes, reverse=True),
        }
        mode = opt.audit_mode
        if mode == "auto":
            mode = "exhaustive" if n <= 12 else "sampled"
        if mode != "none":
            res = mixing_audit(t, spectrum, mode=mode, trials=opt.audit_trials, seed=opt.seed)
            audit = res.to_dict()
            if not res.ok:
                problems.append(f"mixing audit found {res.violations} violations")
    else:
        reason = "not regular" if not regular else "not normal"

    if opt.force_exact or n <= opt.exact_cap:
        result = exact_max_consistent(t, cap=opt.exact_cap)
    else:
        result = heuristic_max_consistent(t, restarts=opt.restarts, seed=opt.seed)
    ranking = result.to_dict()
    if spectrum is not None and result.value > theorem_bound(n, spectrum.lam):
        problems.append("best ranking exceeds the spectral bound")

    cert = bisection_certificate(t, result.best_sigma, spectrum.lam if spectrum else None)
    if cert.flagged_levels:
        problems.append(f"bisection levels {cert.flagged_levels} exceed 2*lambda*2^(r-1)")

    schutte = []
    for k in opt.schutte_k:
        if 1 <= k <= n - 1:
            try:
                schutte.append(has_schutte(t, k, opt.schutte_budget).to_dict())
            except BudgetExceeded as exc:
                schutte.append({"k": k, "skipped": str(exc)})

    dr, common = is_doubly_regular(t)
    low, high = trivial_bounds(n)
    return CertificateReport(
        n=n,
        construction=spec,
        content_hash=content_hash(t),
        regular=regular,
        normal=normal,
        spectral=spectral,
        spectral_omitted_reason=reason,
        trivial_bounds=[low, high],
        ranking=ranking,
        quasi_random_ratio=result.value / (n * n / 4),
        ratio_is_lower_bound=not result.exact,
        doubly_regular=dr,
        common_out_neighbours=common,
        schutte=schutte,
        mixing_audit=audit,
        certificate={k: v for k, v in cert.to_dict().items() if k != "blocks"},
        problems=problems,
    )
