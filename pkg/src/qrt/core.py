"""Tournament representation, validation and edge counting.

A tournament on ``n`` vertices is stored as ``n`` out-neighbour bit rows:
bit ``y`` of ``rows[x]`` is set iff the edge is directed ``x -> y``.  Python
integers serve as the bit sets, so set intersections are ``&`` and counts are
``int.bit_count``.

Vertices are 0-indexed.  Rankings use ranks ``1..n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

#: PRNG used by every seeded routine in the package (numpy PCG64).
PRNG_ALGORITHM = "numpy.PCG64/v1"


class TournamentError(ValueError):
    """Raised when an adjacency structure violates the tournament axioms."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


def rng_from_seed(seed):
    return np.random.Generator(np.random.PCG64(seed))


def popcount(x: int) -> int:
    return x.bit_count()


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


def members_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class VertexSet:
    """A set of vertex indices held as a bit mask."""

    mask: int = 0

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        return cls(mask_of(vertices))

    def __len__(self):
        return self.mask.bit_count()

    def __iter__(self):
        return iter(members_of(self.mask))

    def __contains__(self, v):
        return bool(self.mask >> v & 1)


VertexLike = Union[VertexSet, int, Iterable[int]]


def _as_mask(s: VertexLike) -> int:
    if isinstance(s, VertexSet):
        return s.mask
    if isinstance(s, (int, np.integer)):
        return int(s)
    return mask_of(s)


@dataclass(frozen=True)
class Ranking:
    """A bijection vertex -> rank, ``sigma[v]`` in ``1..n``."""

    sigma: tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(r) for r in self.sigma)
        if sorted(sigma) != list(range(1, len(sigma) + 1)):
            raise ValueError(f"not a bijection onto 1..{len(sigma)}: {sigma}")
        object.__setattr__(self, "sigma", sigma)

    @property
    def n(self) -> int:
        return len(self.sigma)

    @classmethod
    def identity(cls, n: int) -> "Ranking":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Ranking":
        """Build the ranking that puts ``order[0]`` first, ``order[1]`` second, ..."""
        sigma = [0] * len(order)
        for rank, v in enumerate(order, start=1):
            sigma[v] = rank
        return cls(tuple(sigma))

    def order(self) -> list[int]:
        """Vertices listed from rank 1 to rank n."""
        out = [0] * self.n
        for v, r in enumerate(self.sigma):
            out[r - 1] = v
        return out


def reverse_ranking(r: Ranking) -> Ranking:
    n = r.n
    return Ranking(tuple(n + 1 - s for s in r.sigma))


@dataclass(frozen=True)
class Tournament:
    """Complete oriented graph stored as out-neighbour bit rows.

    Construct with :meth:`from_matrix`, :meth:`from_edges` or directly from
    rows; direct construction does not validate, call :func:`validate`.
    """

    n: int
    rows: tuple[int, ...]
    _in_rows: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise TournamentError(f"expected {self.n} rows, got {len(self.rows)}")
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        cols = [0] * self.n
        for x, row in enumerate(rows):
            for y in members_of(row):
                if y < self.n:
                    cols[y] |= 1 << x
        object.__setattr__(self, "_in_rows", tuple(cols))

    @classmethod
    def from_matrix(cls, adj) -> "Tournament":
        a = np.asarray(adj)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise TournamentError(f"adjacency must be square, got shape {a.shape}")
        if not np.isin(a, (0, 1)).all():
            raise TournamentError("adjacency entries must be 0 or 1")
        rows = tuple(mask_of(np.flatnonzero(a[x])) for x in range(a.shape[0]))
        return cls(a.shape[0], rows)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Tournament":
        rows = [0] * n
        for x, y in edges:
            rows[x] |= 1 << y
        return cls(n, tuple(rows))

    @property
    def in_rows(self) -> tuple[int, ...]:
        """In-neighbour masks: bit ``x`` of ``in_rows[y]`` set iff ``x -> y``."""
        return self._in_rows

    def has_edge(self, x: int, y: int) -> bool:
        return bool(self.rows[x] >> y & 1)

    def edges(self):
        for x, row in enumerate(self.rows):
            for y in members_of(row):
                yield x, y

    def to_matrix(self, dtype=np.int64) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=dtype)
        for x, y in self.edges():
            m[x, y] = 1
        return m

    def reversed(self) -> "Tournament":
        return Tournament(self.n, self._in_rows)


def validate(t: Tournament) -> None:
    """Check the tournament axioms; raise :class:`TournamentError` on the first
    violation in row-major pair order."""
    full = (1 << t.n) - 1
    for x, row in enumerate(t.rows):
        if row & ~full:
            raise TournamentError(f"row {x} has bits beyond vertex {t.n - 1}")
    for x in range(t.n):
        for y in range(t.n):
            fwd = t.rows[x] >> y & 1
            if x == y:
                if fwd:
                    raise TournamentError(f"self-loop at ({x}, {x})", (x, x))
                continue
            back = t.rows[y] >> x & 1
            if fwd + back != 1:
                kind = "both directions" if fwd else "no direction"
                raise TournamentError(f"pair ({x}, {y}) has {kind}", (x, y))


def is_valid(t: Tournament) -> bool:
    try:
        validate(t)
    except TournamentError:
        return False
    return True


def out_degrees(t: Tournament) -> list[int]:
    return [row.bit_count() for row in t.rows]


def is_regular(t: Tournament) -> bool:
    if t.n % 2 == 0:
        return False
    d = (t.n - 1) // 2
    return all(row.bit_count() == d for row in t.rows)


def common_out_counts(t: Tournament) -> np.ndarray:
    """``N+[x, y]`` = number of vertices beaten by both x and y."""
    m = t.to_matrix()
    return m @ m.T


def common_in_counts(t: Tournament) -> np.ndarray:
    m = t.to_matrix()
    return m.T @ m


def is_normal(t: Tournament) -> bool:
    """True iff every pair has as many common out- as common in-neighbours
    and every vertex has equal in- and out-degree (the diagonal of the count
    matrices), i.e. iff ``M M^T == M^T M``."""
    return bool(np.array_equal(common_out_counts(t), common_in_counts(t)))


def edges_between(t: Tournament, a: VertexLike, b: VertexLike) -> int:
    """Number of edges directed from ``a`` into ``b`` (disjoint sets)."""
    am, bm = _as_mask(a), _as_mask(b)
    if am & bm:
        raise ValueError("vertex sets must be disjoint")
    total = 0
    x = 0
    while am:
        if am & 1:
            total += (t.rows[x] & bm).bit_count()
        am >>= 1
        x += 1
    return total


def consistent_edges(t: Tournament, r: Ranking) -> int:
    """Count edges ``(x, y)`` with ``sigma(x) < sigma(y)``."""
    if r.n != t.n:
        raise ValueError(f"ranking has {r.n} entries, tournament has {t.n} vertices")
    later = 0
    total = 0
    for v in reversed(r.order()):
        total += (t.rows[v] & later).bit_count()
        later |= 1 << v
    return total


def sample_random_tournament(n: int, seed=None) -> Tournament:
    """Orient each pair ``x < y`` by an unbiased coin; pairs are drawn in
    row-major order from a PCG64 stream seeded with ``seed``."""
    if n < 1:
        raise ValueError("n must be positive")
    coins = rng_from_seed(seed).integers(0, 2, size=n * (n - 1) // 2)
    rows = [0] * n
    k = 0
    for x in range(n):
        for y in range(x + 1, n):
            if coins[k]:
                rows[x] |= 1 << y
            else:
                rows[y] |= 1 << x
            k += 1
    return Tournament(n, tuple(rows))


def transitive_tournament(n: int) -> Tournament:
    """Vertex ``x`` beats every ``y > x``."""
    full = (1 << n) - 1
    return Tournament(n, tuple(full & ~((1 << (x + 1)) - 1) for x in range(n)))


def random_ranking(n: int, seed=None) -> Ranking:
    perm = rng_from_seed(seed).permutation(n)
    return Ranking(tuple(int(v) + 1 for v in perm))


def random_regular_tournament(n: int, seed=None, flips: int | None = None) -> Tournament:
    """Regular tournament from the rotational one by reversing random directed
    3-cycles, which keeps every out-degree fixed."""
    if n % 2 == 0:
        raise ValueError("regular tournaments need an odd vertex count")
    d = (n - 1) // 2
    adj = np.zeros((n, n), dtype=bool)
    for x in range(n):
        for s in range(1, d + 1):
            adj[x, (x + s) % n] = True
    rng = rng_from_seed(seed)
    for _ in range(flips if flips is not None else 10 * n * n):
        x, y, z = rng.choice(n, size=3, replace=False)
        if adj[x, y] and adj[y, z] and adj[z, x]:
            adj[x, y] = adj[y, z] = adj[z, x] = False
            adj[y, x] = adj[z, y] = adj[x, z] = True
        elif adj[y, x] and adj[z, y] and adj[x, z]:
            adj[y, x] = adj[z, y] = adj[x, z] = False
            adj[x, y] = adj[y, z] = adj[z, x] = True
    return Tournament.from_matrix(adj.astype(int))
