"""Lexicographically minimal embeddings of sums, lower shadows, projections
and the triangle graph built from the pair embedding.

Multisets are stored as non-decreasing tuples of indices into the ground
PointSet.  Because the ground set is sorted, comparing index tuples
lexicographically is the same as comparing the multisets themselves.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .sumsets import PointSet, first_hit_pairs

KMultiset = tuple  # non-decreasing tuple of ground-set indices


@dataclass(frozen=True)
class MultisetFamily:
    ground: PointSet
    k: int
    members: tuple[KMultiset, ...]  # sorted, deduplicated

    def __post_init__(self):
        n = len(self.ground)
        for m in self.members:
            if len(m) != self.k or any(x > y for x, y in zip(m, m[1:])):
                raise ValueError(f"{m} is not a sorted {self.k}-multiset")
            if m and not 0 <= m[0] <= m[-1] < n:
                raise ValueError(f"{m} has entries outside the ground set")

    @classmethod
    def build(cls, ground: PointSet, k: int, members) -> "MultisetFamily":
        return cls(ground, k, tuple(sorted({tuple(sorted(m)) for m in members})))

    def __len__(self):
        return len(self.members)

    def as_set(self) -> frozenset:
        return frozenset(self.members)

    def elements(self, member: KMultiset) -> tuple[tuple[int, ...], ...]:
        pts = self.ground.elements
        return tuple(pts[i] for i in member)

    def lines(self) -> list[str]:
        """One multiset per line, entries separated by spaces (coordinates by commas)."""
        return [
            " ".join(",".join(map(str, p)) for p in self.elements(m)) for m in self.members
        ]


def multiset_lex_less(P, Q) -> bool:
    """P < Q iff the least element of the multiset symmetric difference lies in P."""
    cp, cq = Counter(P), Counter(Q)
    diff = (cp - cq) + (cq - cp)
    if not diff:
        return False
    least = min(diff)
    return cp[least] > cq[least]


def _embedding(A: PointSet, h: int, ordered: bool):
    if h < 1:
        raise ValueError("arity must be positive")
    if not len(A):
        raise ValueError("embedding of an empty set")
    reps = np.arange(len(A), dtype=np.int64).reshape(-1, 1)
    sums = A.coords
    for _ in range(h - 1):
        jmin = None if ordered else reps[:, -1]
        sums, ii, jj = first_hit_pairs(A.group, sums, A.coords, jmin)
        reps = np.hstack([reps[ii], jj.reshape(-1, 1)])
    return list(map(tuple, reps.tolist())), sums


def lexmin_embedding(A: PointSet, h: int) -> MultisetFamily:
    """For each s in hA, the lexicographically least h-multiset of A summing to s."""
    if h < 1:
        raise ValueError("h must be positive")
    reps, _ = _embedding(A, h, ordered=False)
    return MultisetFamily(A, h, tuple(reps))


def tuple_embedding(A: PointSet, h: int) -> list[tuple[int, ...]]:
    """Lexicographically least ordered h-tuple per sum, in lex order."""
    reps, _ = _embedding(A, h, ordered=True)
    return reps


def shadow(B: MultisetFamily) -> MultisetFamily:
    if B.k < 2:
        raise ValueError("shadow needs arity k >= 2")
    out = set()
    for m in B.members:
        for t in range(B.k):
            out.add(m[:t] + m[t + 1:])
    return MultisetFamily(B.ground, B.k - 1, tuple(sorted(out)))


@dataclass(frozen=True)
class ShadowReport:
    h: int
    passed: bool
    shadow_size: int
    c_size: int
    s_size: int


def verify_shadow_identity(A: PointSet, h: int) -> ShadowReport:
    if h < 2:
        raise ValueError("h must be at least 2")
    S = lexmin_embedding(A, h)
    C = lexmin_embedding(A, h - 1)
    dS = shadow(S)
    return ShadowReport(h, dS.as_set() == C.as_set(), len(dS), len(C), len(S))


@dataclass(frozen=True)
class ProjectionReport:
    S_tuples: tuple[tuple[int, int, int], ...]
    C_tuples: tuple[tuple[int, int], ...]
    proj12: frozenset
    proj13: frozenset
    proj23: frozenset
    contained: tuple[bool, bool, bool]
    lw_lhs: int  # |S|^2
    lw_rhs: int  # |p12| |p23| |p13|

    @property
    def lw_holds(self) -> bool:
        return self.lw_lhs <= self.lw_rhs

    @property
    def passed(self) -> bool:
        return all(self.contained) and self.lw_holds


def tuple_embedding_projections(A: PointSet) -> ProjectionReport:
    S = tuple_embedding(A, 3)
    C = tuple_embedding(A, 2)
    cset = frozenset(C)
    p12 = frozenset((x, y) for x, y, _ in S)
    p13 = frozenset((x, z) for x, _, z in S)
    p23 = frozenset((y, z) for _, y, z in S)
    return ProjectionReport(
        tuple(S), tuple(C), p12, p13, p23,
        (p12 <= cset, p13 <= cset, p23 <= cset),
        len(S) ** 2, len(p12) * len(p23) * len(p13),
    )


@dataclass(frozen=True)
class TriangleStats:
    vertex_count: int
    edge_count: int
    triangle_count: int
    distinct_triple_count: int  # |S'|
    distinct_pair_count: int  # |C'|
    size_2a: int
    size_3a: int

    @property
    def triples_in_triangles(self) -> bool:
        return self.distinct_triple_count <= self.triangle_count

    @property
    def repeated_part_bounded(self) -> bool:
        """|S| - |S'| <= 2|C|."""
        return self.size_3a - self.distinct_triple_count <= 2 * self.size_2a

    @property
    def kk_bound_holds(self) -> bool:
        """triangles <= (sqrt(2)/3) |E|^(3/2), decided exactly."""
        return 9 * self.triangle_count ** 2 <= 2 * self.edge_count ** 3

    @property
    def kk_bound(self) -> float:
        return sqrt(2) / 3 * self.size_2a ** 1.5 + 2 * self.size_2a

    @property
    def kk_ruzsa_holds(self) -> bool:
        """|3A| <= (sqrt(2)/3)|2A|^(3/2) + 2|2A|, decided exactly."""
        excess = self.size_3a - 2 * self.size_2a
        return excess <= 0 or 9 * excess ** 2 <= 2 * self.size_2a ** 3

    @property
    def passed(self) -> bool:
        return (
            self.triples_in_triangles
            and self.repeated_part_bounded
            and self.kk_bound_holds
            and self.kk_ruzsa_holds
            and self.triangle_count <= _c3(self.vertex_count)
        )


def _c3(n):
    return n * (n - 1) * (n - 2) // 6


def count_triangles(n: int, edges) -> int:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    total = 0
    for u, v in edges:
        a, b = adj[u], adj[v]
        if len(a) > len(b):
            a, b = b, a
        total += sum(1 for w in a if w in b)
    return total // 3


def triangle_stats(A: PointSet) -> TriangleStats:
    S = tuple_embedding(A, 3)
    C = tuple_embedding(A, 2)
    edges = {(min(x, y), max(x, y)) for x, y in C if x != y}
    s_prime = sum(1 for x, y, z in S if x != y and y != z)
    c_prime = sum(1 for x, y in C if x != y)
    return TriangleStats(
        vertex_count=len(A),
        edge_count=len(edges),
        triangle_count=count_triangles(len(A), sorted(edges)),
        distinct_triple_count=s_prime,
        distinct_pair_count=c_prime,
        size_2a=len(C),
        size_3a=len(S),
    )
