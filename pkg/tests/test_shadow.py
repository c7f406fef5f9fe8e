from collections import defaultdict
from itertools import combinations_with_replacement, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sumset_lab.group import GroupSpec
from sumset_lab.shadow import (MultisetFamily, count_triangles, lexmin_embedding,
                               multiset_lex_less, shadow, triangle_stats, tuple_embedding,
                               tuple_embedding_projections, verify_shadow_identity)
from sumset_lab.sumsets import PointSet, iterated_sumset

Z = GroupSpec.integers()


def ints(*vals):
    return PointSet(Z, ([v] for v in vals))


def members(fam):
    return [tuple(fam.ground.elements[i][0] for i in m) for m in fam.members]


def test_multiset_order_matches_sorted_tuples():
    for n in range(1, 5):
        for k in range(1, 5):
            ms = list(combinations_with_replacement(range(n), k))
            for P, Q in product(ms, ms):
                assert multiset_lex_less(P, Q) == (P < Q), (P, Q)


def _oracle_lexmin(A, h):
    """Every representative of every sum; keep the smallest sorted tuple."""
    best = {}
    g = A.group
    for combo in combinations_with_replacement(range(len(A)), h):
        s = g.canonical(np.sum(A.coords[list(combo)], axis=0).tolist())
        if s not in best or combo < best[s]:
            best[s] = combo
    return set(best.values())


@pytest.mark.parametrize("h", [2, 3, 4])
def test_lexmin_matches_oracle(backend, h):
    rng = np.random.default_rng(11)
    for g in (Z, GroupSpec.integers(2), GroupSpec.cyclic(6, 2)):
        for _ in range(15):
            k = int(rng.integers(1, 7))
            cols = [rng.integers(0, n, k) if n else rng.integers(-6, 7, k) for n in g.moduli]
            A = PointSet.from_array(g, np.stack(cols, axis=1))
            fam = lexmin_embedding(A, h)
            assert set(fam.members) == _oracle_lexmin(A, h)
            assert len(fam) == len(iterated_sumset(A, h))


def test_lexmin_examples():
    assert members(lexmin_embedding(ints(0, 1), 2)) == [(0, 0), (0, 1), (1, 1)]
    assert members(lexmin_embedding(ints(0, 1, 2), 2)) == [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2)]
    fam = lexmin_embedding(ints(1, 3, 9), 3)
    assert len(fam) == 10 and fam.as_set() == set(combinations_with_replacement(range(3), 3))


def test_shadow_examples():
    A = ints(1, 2, 3)
    assert shadow(MultisetFamily.build(A, 3, [(0, 0, 0)])).members == ((0, 0),)
    assert shadow(MultisetFamily.build(A, 3, [(0, 1, 2)])).members == ((0, 1), (0, 2), (1, 2))
    B = MultisetFamily.build(A, 3, combinations_with_replacement(range(2), 3))
    assert shadow(B).as_set() == set(combinations_with_replacement(range(2), 2))
    with pytest.raises(ValueError):
        shadow(MultisetFamily.build(A, 1, [(0,)]))


def test_family_validation():
    A = ints(1, 2)
    with pytest.raises(ValueError):
        MultisetFamily(A, 2, ((1, 0),))
    with pytest.raises(ValueError):
        MultisetFamily(A, 2, ((0, 5),))
    fam = MultisetFamily.build(PointSet(GroupSpec.integers(2), [[1, 2], [3, 4]]), 2, [(1, 0)])
    assert fam.lines() == ["1,2 3,4"]


@pytest.mark.parametrize("A,h,size", [
    (ints(0, 1, 2), 3, 5),
    (ints(1, 3, 9), 3, 6),
    (PointSet(GroupSpec.cyclic(5), ([i] for i in range(5))), 3, 5),
])
def test_shadow_identity_examples(A, h, size):
    rep = verify_shadow_identity(A, h)
    assert rep.passed and rep.shadow_size == size == rep.c_size


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)), min_size=1, max_size=7),
       st.integers(2, 4))
def test_shadow_identity_property(pts, h):
    assert verify_shadow_identity(PointSet(GroupSpec.integers(2), pts), h).passed


def test_projection_examples():
    rep = tuple_embedding_projections(ints(0, 1))
    assert rep.S_tuples == ((0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1))
    assert (rep.lw_lhs, rep.lw_rhs) == (16, 27) and rep.passed
    rep = tuple_embedding_projections(ints(1, 3, 9))
    assert len(rep.S_tuples) == 10 and rep.lw_lhs == 100 and rep.lw_rhs <= 216
    assert all(len(p) <= 6 for p in (rep.proj12, rep.proj13, rep.proj23)) and rep.passed
    rep = tuple_embedding_projections(ints(5))
    assert (rep.lw_lhs, rep.lw_rhs) == (1, 1) and rep.passed


def test_tuple_embedding_is_lexmin_ordered_tuple():
    A = ints(0, 2, 3, 5)
    best = defaultdict(lambda: None)
    for t in product(range(4), repeat=3):
        s = sum(A.elements[i][0] for i in t)
        if best[s] is None or t < best[s]:
            best[s] = t
    assert set(tuple_embedding(A, 3)) == set(best.values())


def test_triangle_examples():
    ts = triangle_stats(ints(1, 3, 9))
    assert (ts.edge_count, ts.triangle_count, ts.distinct_triple_count) == (3, 1, 1)
    assert ts.size_3a == 10 and ts.kk_ruzsa_holds and ts.passed
    assert 10 <= ts.kk_bound
    ts = triangle_stats(ints(0, 1))
    assert (ts.edge_count, ts.triangle_count) == (1, 0)
    ts = triangle_stats(ints(4))
    assert (ts.edge_count, ts.triangle_count, ts.distinct_triple_count) == (0, 0, 0)


def test_count_triangles_complete_graph():
    edges = [(u, v) for u in range(6) for v in range(u + 1, 6)]
    assert count_triangles(6, edges) == 20


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=1, max_size=9))
def test_triangle_invariants(vals):
    A = PointSet(GroupSpec.cyclic(16), ([v] for v in vals))
    ts = triangle_stats(A)
    assert ts.passed
    assert ts.size_3a - ts.distinct_triple_count <= 2 * ts.size_2a
    assert tuple_embedding_projections(A).passed
