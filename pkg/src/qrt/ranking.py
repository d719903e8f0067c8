"""Maximum consistent-edge rankings and the bisection certificate."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Ranking, Tournament, consistent_edges, reverse_ranking, rng_from_seed

DP_CAP = 20
DP_HARD_CAP = 24


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class RankingResult:
    best_sigma: Ranking
    value: int
    exact: bool
    method: str
    history: tuple[int, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "sigma": list(self.best_sigma.sigma),
            "value": self.value,
            "exact": self.exact,
            "method": self.method,
        }


def trivial_bounds(n: int) -> tuple[float, int]:
    """``(n(n-1)/4, n(n-1)/2)``: every tournament's optimum lies between these."""
    if n < 1:
        raise ValueError("n must be positive")
    return n * (n - 1) / 4, n * (n - 1) // 2


def theorem_bound(n: int, lam: float) -> float:
    """Spectral upper bound ``n(n-1)/4 + lam * n * log2(2n)`` on the optimum."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return n * (n - 1) / 4 + lam * n * math.log2(2 * n)


def _popcount_table(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int16)
    for b in range(n):
        pc[1 << b: 1 << (b + 1)] = pc[: 1 << b] + 1
    return pc


def exact_max_consistent(t: Tournament, cap: int = DP_CAP) -> RankingResult:
    """Exact optimum by dynamic programming over vertex subsets.

    ``best[U]`` is the most consistent edges inside ``U``; the last-ranked
    vertex ``v`` of ``U`` collects every edge from ``U - {v}`` into ``v``.
    Subsets are processed in layers of equal size, vectorized over all
    subsets in a layer.  Ties go to the smallest vertex.
    """
    n = t.n
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the exact-solver cap {cap}")
    if n > DP_HARD_CAP:
        raise CapExceeded(f"n={n} exceeds the hard cap {DP_HARD_CAP}")
    if n > DP_CAP:
        warnings.warn(f"exact DP on n={n} needs 2^{n} states", RuntimeWarning, stacklevel=2)
    if n == 0:
        return RankingResult(Ranking(()), 0, True, "subset-dp")
    size = 1 << n
    pc = _popcount_table(n)
    best = np.full(size, -1, dtype=np.int32)
    last = np.zeros(size, dtype=np.int8)
    best[0] = 0
    masks = np.arange(size, dtype=np.int64)
    by_layer = np.argsort(pc, kind="stable")
    bounds = np.searchsorted(pc[by_layer], np.arange(n + 2))
    in_masks = [np.int64(m) for m in t.in_rows]
    for k in range(1, n + 1):
        layer = masks[by_layer[bounds[k]:bounds[k + 1]]]
        acc = np.full(len(layer), -1, dtype=np.int32)
        arg = np.zeros(len(layer), dtype=np.int8)
        for v in range(n):
            bit = np.int64(1) << v
            has = (layer & bit) != 0
            rest = layer[has] ^ bit
            cand = best[rest] + pc[rest & in_masks[v]]
            sub = acc[has]
            better = cand > sub
            sub[better] = cand[better]
            acc[has] = sub
            a = arg[has]
            a[better] = v
            arg[has] = a
        best[layer] = acc
        last[layer] = arg
    order = []
    u = size - 1
    while u:
        v = int(last[u])
        order.append(v)
        u ^= 1 << v
    order.reverse()
    sigma = Ranking.from_order(order)
    value = int(best[size - 1])
    return RankingResult(sigma, value, True, "subset-dp")


def degree_order(t: Tournament) -> list[int]:
    """Vertices by decreasing out-degree, ties by index."""
    return sorted(range(t.n), key=lambda v: (-t.rows[v].bit_count(), v))


def _consistent_from_matrix(w: np.ndarray) -> int:
    return int(np.triu(w, 1).sum())


def local_search(m: np.ndarray, order: list[int]) -> list[int]:
    """Single-vertex insertion moves until no move improves.

    Positions are scanned in rank order; the first position whose vertex has
    an improving reinsertion is moved to its best new slot, and the scan
    restarts from the top.
    """
    order = list(order)
    n = len(order)
    while True:
        w = m[np.ix_(order, order)]
        moved = False
        for i in range(n):
            # moving i to j > i gains sum_{k=i+1..j} (w[k,i] - w[i,k]);
            # moving to j < i gains sum_{k=j..i-1} (w[i,k] - w[k,i])
            diff = w[:, i] - w[i, :]
            right = np.cumsum(diff[i + 1:])
            left = np.cumsum(-diff[:i][::-1])
            best_gain, best_j = 0, i
            if right.size and right.max() > best_gain:
                best_gain, best_j = int(right.max()), i + 1 + int(right.argmax())
            if left.size and left.max() > best_gain:
                best_gain, best_j = int(left.max()), i - 1 - int(left.argmax())
            if best_gain > 0:
                v = order.pop(i)
                order.insert(best_j, v)
                moved = True
                break
        if not moved:
            return order


def heuristic_max_consistent(t: Tournament, restarts: int = 4, seed=0) -> RankingResult:
    """Best ranking found by insertion local search from several starts.

    The first start is the out-degree order, the rest are seeded shuffles.
    The reverse of every local optimum is also scored.  ``history`` records
    the best value after each restart.
    """
    n = t.n
    m = t.to_matrix(dtype=np.int64)
    rng = rng_from_seed(seed)
    best_order, best_value = None, -1
    history = []
    for r in range(max(restarts, 1)):
        start = degree_order(t) if r == 0 else [int(v) for v in rng.permutation(n)]
        order = local_search(m, start)
        for cand in (order, order[::-1]):
            value = _consistent_from_matrix(m[np.ix_(cand, cand)]) if n else 0
            if value > best_value:
                best_order, best_value = cand, value
        history.append(best_value)
    sigma = Ranking.from_order(best_order)
    return RankingResult(sigma, best_value, False, "insertion-local-search", tuple(history))


def brute_force_max_consistent(t: Tournament) -> int:
    """Enumerate all n! rankings (tests only, n <= 9)."""
    from itertools import permutations

    best = 0
    for perm in permutations(range(t.n)):
        best = max(best, consistent_edges(t, Ranking.from_order(perm)))
    return best


@dataclass
class BisectionCertificate:
    r: int
    levels: list[list[int]]
    level_sums: list[int]
    level_bound: Optional[float]
    total: int
    sigma_value: int
    sigma_reverse_value: int
    blocks: list[list[list[int]]]
    flagged_levels: list[int]

    @property
    def identity_holds(self) -> bool:
        return self.total == self.sigma_value - self.sigma_reverse_value

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "levels": self.levels,
            "level_sums": self.level_sums,
            "level_bound": self.level_bound,
            "total": self.total,
            "sigma_value": self.sigma_value,
            "sigma_reverse_value": self.sigma_reverse_value,
            "blocks": self.blocks,
            "flagged_levels": self.flagged_levels,
            "identity_holds": self.identity_holds,
        }


class CertificateError(AssertionError):
    pass


def bisection_certificate(t: Tournament, sigma: Ranking, lam: Optional[float] = None,
                          slack: float = 1e-9) -> BisectionCertificate:
    """Recursive halving of the ranking into consecutive blocks.

    At each level every block of size ``s >= 2`` splits into its top
    ``ceil(s/2)`` and bottom ``floor(s/2)`` vertices and records
    ``e(top, bottom) - e(bottom, top)``.  The level differences add up to
    ``C(T, sigma) - C(T, sigma')`` exactly.  With ``lam`` given, levels whose
    sum exceeds ``2 lam 2^(r-1)`` are flagged.

    Raises CertificateError if the identity fails.
    """
    n = t.n
    r = max((n - 1).bit_length(), 0)
    current = [sigma.order()] if n else []
    levels, sums, blocks = [], [], []
    for i in range(1, r + 1):
        diffs, nxt = [], []
        for block in current:
            if len(block) < 2:
                nxt.append(block)
                continue
            a1 = (len(block) + 1) // 2
            top, bottom = block[:a1], block[a1:]
            if len(top) > 1 << (r - i) or len(bottom) > 1 << (r - i):
                raise CertificateError(f"block larger than 2^{r - i} at level {i}")
            tm = sum(1 << v for v in top)
            bm = sum(1 << v for v in bottom)
            fwd = sum((t.rows[v] & bm).bit_count() for v in top)
            back = sum((t.rows[v] & tm).bit_count() for v in bottom)
            diffs.append(fwd - back)
            nxt.extend((top, bottom))
        levels.append(diffs)
        sums.append(sum(diffs))
        blocks.append([list(b) for b in nxt])
        current = nxt
    total = sum(sums)
    value = consistent_edges(t, sigma)
    rev = consistent_edges(t, reverse_ranking(sigma))
    bound = None if lam is None else 2 * lam * 2 ** (r - 1)
    flagged = [] if bound is None else [i + 1 for i, s in enumerate(sums) if s > bound + slack]
    cert = BisectionCertificate(r, levels, sums, bound, total, value, rev, blocks, flagged)
    if not cert.identity_holds:
        raise CertificateError(f"telescoping total {total} != {value} - {rev}")
    return cert
