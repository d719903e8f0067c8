"""Cyclotomic and Paley tournaments over prime fields, plus spec dispatch."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import Tournament


class ConstructionError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def primes_up_to(limit: int) -> list[int]:
    return [p for p in range(2, limit + 1) if is_prime(p)]


def find_primitive_element(p: int) -> int:
    """Smallest ``g >= 2`` generating the multiplicative group mod ``p``."""
    if not is_prime(p):
        raise ConstructionError(f"{p} is not prime")
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ConstructionError(f"no primitive element mod {p}")  # unreachable for prime p


def _check_cyclotomic_params(p: int, m: int) -> None:
    if m < 2 or m % 2:
        raise ConstructionError(f"m must be a positive even integer, got {m}")
    if not is_prime(p):
        raise ConstructionError(f"{p} is not prime")
    if p % (2 * m) != m + 1:
        raise ConstructionError(f"need p = m+1 (mod 2m); {p} mod {2 * m} = {p % (2 * m)}")


def cyclotomic_classes(p: int, m: int) -> list[frozenset[int]]:
    """Cosets ``S_i = {g^t : t = i mod m}`` of the m-th powers in F_p^*."""
    _check_cyclotomic_params(p, m)
    g = find_primitive_element(p)
    classes = [set() for _ in range(m)]
    x = 1
    for t in range(p - 1):
        classes[t % m].add(x)
        x = x * g % p
    return [frozenset(c) for c in classes]


@dataclass(frozen=True)
class CyclotomicSpec:
    p: int
    m: int
    g: int
    classes: tuple[frozenset[int], ...]
    ivec: tuple[int, ...]
    S: frozenset[int]

    def to_dict(self) -> dict:
        return {"family": "cyclotomic", "p": self.p, "m": self.m, "ivec": list(self.ivec)}


def _is_half_set(S, p: int) -> bool:
    neg = {(-s) % p for s in S}
    return not (neg & set(S)) and len(S) + len(neg) == p - 1 and 0 not in S


def cyclotomic_spec(p: int, m: int, ivec) -> CyclotomicSpec:
    """Validate ``ivec`` by direct set computation: the union of the chosen
    classes must be disjoint from its negation and cover F_p^* together with it."""
    classes = cyclotomic_classes(p, m)
    ivec = tuple(int(i) for i in ivec)
    if len(ivec) != m // 2:
        raise ConstructionError(f"ivec must have m/2 = {m // 2} entries, got {len(ivec)}")
    if any(not 0 <= i < m for i in ivec):
        raise ConstructionError(f"ivec entries must lie in 0..{m - 1}")
    S = frozenset().union(*(classes[i] for i in ivec))
    if len(S) != (p - 1) // 2 or not _is_half_set(S, p):
        raise ConstructionError(f"classes {ivec} do not form an antisymmetric half of F_{p}^*")
    return CyclotomicSpec(p, m, find_primitive_element(p), tuple(classes), ivec, S)


def admissible_ivecs(p: int, m: int) -> list[tuple[int, ...]]:
    """All sorted index tuples giving a valid half set (as sets, not orderings)."""
    classes = cyclotomic_classes(p, m)
    out = []
    for ivec in combinations(range(m), m // 2):
        S = frozenset().union(*(classes[i] for i in ivec))
        if _is_half_set(S, p):
            out.append(ivec)
    return out


def circulant_tournament(n: int, S) -> Tournament:
    """Edge ``x -> y`` iff ``(x - y) mod n`` lies in ``S``."""
    S = {s % n for s in S}
    rows = []
    for x in range(n):
        row = 0
        for s in S:
            row |= 1 << ((x - s) % n)
        rows.append(row)
    return Tournament(n, tuple(rows))


def build_cyclotomic(spec: CyclotomicSpec) -> Tournament:
    return circulant_tournament(spec.p, spec.S)


def build_paley(p: int) -> Tournament:
    if p % 4 != 3:
        raise ConstructionError(f"Paley tournaments need p = 3 (mod 4), got {p}")
    return build_cyclotomic(cyclotomic_spec(p, 2, (0,)))


def quadratic_residues(p: int) -> frozenset[int]:
    return frozenset(x * x % p for x in range(1, p))


def build_from_spec(spec: dict) -> tuple[Tournament, dict]:
    """Build a tournament from a JSON construction spec.

    Returns the tournament and a normalized copy of the spec.  For the
    cyclotomic families the normalized spec carries ``"S"`` (the difference
    set) so spectral code can use the character-sum path.
    """
    family = spec.get("family")
    if family == "paley":
        p = int(spec["p"])
        t = build_paley(p)
        return t, {"family": "paley", "p": p, "S": sorted(quadratic_residues(p))}
    if family == "cyclotomic":
        cs = cyclotomic_spec(int(spec["p"]), int(spec["m"]), spec["ivec"])
        return build_cyclotomic(cs), {**cs.to_dict(), "S": sorted(cs.S)}
    if family == "elliptic":
        from .elliptic import build_elliptic_from_spec

        return build_elliptic_from_spec(spec)
    raise ConstructionError(f"unknown family {family!r}")
