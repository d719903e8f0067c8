"""Elliptic-curve point groups over F_p and the tournaments built on them.

Points are ``(x, y)`` tuples with coordinates in ``[0, p)``; the point at
infinity is ``None``.  A :class:`GroupTable` orders its elements as identity
first, then affine points sorted by ``(x, y)``; tournament vertex ``i`` is
``points[i]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt
from typing import Optional

from .constructions import ConstructionError, is_prime
from .core import Tournament, rng_from_seed

MAX_P = 10**6

Point = Optional[tuple[int, int]]


@dataclass(frozen=True)
class Curve:
    """``y^2 = x^3 + a x + b`` over F_p."""

    p: int
    a: int
    b: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p <= 3:
            raise ConstructionError(f"curve modulus must be a prime > 3, got {self.p}")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)
        if self.discriminant() == 0:
            raise ConstructionError(f"singular curve a={self.a}, b={self.b} mod {self.p}")

    def discriminant(self) -> int:
        return (4 * self.a**3 + 27 * self.b**2) % self.p

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return (y * y - (x**3 + self.a * x + self.b)) % self.p == 0

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        return (P[0], (-P[1]) % self.p)

    def add(self, P: Point, Q: Point) -> Point:
        """Chord-tangent addition in affine coordinates."""
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            slope = (3 * x1 * x1 + self.a) * pow(2 * y1, -1, p) % p
        else:
            slope = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (slope * slope - x1 - x2) % p
        y3 = (slope * (x1 - x3) - y1) % p
        return (x3, y3)


def in_hasse_interval(p: int, n: int) -> bool:
    """``|n - (p + 1)| <= 2 sqrt(p)``, checked in integers."""
    return (n - p - 1) ** 2 <= 4 * p


def _sqrt_table(p: int) -> dict[int, list[int]]:
    roots: dict[int, list[int]] = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    return roots


def count_points(c: Curve) -> int:
    """Number of F_p-rational points including the point at infinity."""
    p = c.p
    roots = _sqrt_table(p)
    total = 1
    for x in range(p):
        total += len(roots.get((x**3 + c.a * x + c.b) % p, ()))
    return total


@dataclass(frozen=True)
class GroupTable:
    curve: Curve
    points: tuple[Point, ...]
    index: dict = field(repr=False, compare=False)
    neg: tuple[int, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.points)

    @property
    def identity(self) -> int:
        return 0

    def add(self, i: int, j: int) -> int:
        return self.index[self.curve.add(self.points[i], self.points[j])]

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg[j])


def curve_points(c: Curve, max_p: int = MAX_P) -> GroupTable:
    if c.p > max_p:
        raise ConstructionError(f"p={c.p} exceeds enumeration ceiling {max_p}")
    p = c.p
    roots = _sqrt_table(p)
    affine = []
    for x in range(p):
        for y in roots.get((x**3 + c.a * x + c.b) % p, ()):
            affine.append((x, y))
    points = (None, *sorted(affine))
    index = {P: i for i, P in enumerate(points)}
    neg = tuple(index[c.neg(P)] for P in points)
    return GroupTable(c, points, index, neg)


def find_curve_with_order(p: int, n: int) -> Curve:
    """First non-singular curve in lexicographic ``(a, b)`` order with ``n`` points."""
    if n % 2 == 0:
        raise ConstructionError(f"target order must be odd, got {n}")
    if not is_prime(p) or p <= 3:
        raise ConstructionError(f"p must be a prime > 3, got {p}")
    if not in_hasse_interval(p, n):
        raise ConstructionError(f"order {n} lies outside the Hasse interval for p={p}")
    roots = _sqrt_table(p)
    nroots = [len(roots.get(v, ())) for v in range(p)]
    cubes = [x**3 % p for x in range(p)]
    for a in range(p):
        for b in range(p):
            if (4 * a**3 + 27 * b**2) % p == 0:
                continue
            total = 1 + sum(nroots[(cubes[x] + a * x + b) % p] for x in range(p))
            if total == n:
                return Curve(p, a, b)
    raise ConstructionError(f"no curve over F_{p} has {n} points")


@dataclass(frozen=True)
class HalfSet:
    """One element from each inverse pair ``{P, -P}``, ``P`` not the identity."""

    members: frozenset[int]
    rule: str
    seed: Optional[int] = None


def split_inverse_pairs(g: GroupTable, rule: str = "canonical", seed=None) -> HalfSet:
    """Pick one member of every inverse pair.

    ``"canonical"`` keeps the point with the lexicographically smaller
    ``(x, y)``; ``"random"`` flips one seeded coin per pair, pairs visited in
    vertex order.
    """
    if g.order % 2 == 0:
        raise ConstructionError(f"group order {g.order} is even")
    if rule not in ("canonical", "random"):
        raise ConstructionError(f"unknown splitting rule {rule!r}")
    pairs = []
    for i in range(1, g.order):
        j = g.neg[i]
        if i < j:
            pairs.append((i, j))
    if rule == "canonical":
        chosen = {min(i, j, key=lambda k: g.points[k]) for i, j in pairs}
    else:
        coins = rng_from_seed(seed).integers(0, 2, size=len(pairs))
        chosen = {pair[int(c)] for pair, c in zip(pairs, coins)}
    return HalfSet(frozenset(chosen), rule, seed if rule == "random" else None)


def check_half_set(g: GroupTable, s: HalfSet) -> None:
    negs = {g.neg[i] for i in s.members}
    if 0 in s.members or negs & s.members or len(s.members) + len(negs) + 1 != g.order:
        raise ConstructionError("half set must satisfy S, -S, {0} partition G")


def negate_half_set(g: GroupTable, s: HalfSet) -> HalfSet:
    return HalfSet(frozenset(g.neg[i] for i in s.members), s.rule, s.seed)


def build_elliptic_tournament(g: GroupTable, s: HalfSet) -> Tournament:
    """Edge ``x -> y`` iff ``x - y`` lies in the half set."""
    check_half_set(g, s)
    n = g.order
    rows = []
    for x in range(n):
        row = 0
        for y in range(n):
            if x != y and g.sub(x, y) in s.members:
                row |= 1 << y
        rows.append(row)
    return Tournament(n, tuple(rows))


def hasse_interval(p: int) -> tuple[int, int]:
    """Integer orders admitted by the Hasse bound."""
    r = isqrt(4 * p)
    lo, hi = p + 1 - r, p + 1 + r
    while not in_hasse_interval(p, lo):
        lo += 1
    while not in_hasse_interval(p, hi):
        hi -= 1
    return lo, hi


def build_elliptic_from_spec(spec: dict) -> tuple[Tournament, dict]:
    p, n = int(spec["p"]), int(spec["n"])
    rule = spec.get("rule", "canonical")
    seed = spec.get("seed")
    curve = find_curve_with_order(p, n)
    g = curve_points(curve)
    s = split_inverse_pairs(g, rule, seed)
    t = build_elliptic_tournament(g, s)
    norm = {"family": "elliptic", "p": p, "n": n, "rule": rule, "seed": seed,
            "a": curve.a, "b": curve.b}
    return t, norm
