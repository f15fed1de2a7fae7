import itertools

import numpy as np
import pytest

from relrips.cayley import peripheral_ball
from relrips.coned import RelativePath
from relrips.errors import ContainmentError, RelRipsError
from relrips.rips import (RELATIVE_GEODESIC, SAME_COSET, RipsParams, build_plain_rips,
                          build_relative_rips, coset_subcomplex, edge_witness, inclusion)


def rel(coned, name, R, r, d, s, k_max=2):
    cb = coned(name, R)
    return build_relative_rips(cb.base, cb, RipsParams(r, d, s, k_max, R)), cb


def labelled_edges(X):
    return {frozenset(e) for e in X.labelled(1)}


def test_dictionary_order():
    assert RipsParams(1, 5, 0) < RipsParams(2, 0, 0)
    assert RipsParams(1, 2, 3) < RipsParams(1, 3, 0)
    assert RipsParams(1, 2, 3, k_max=1) == RipsParams(1, 2, 3, k_max=4)
    with pytest.raises(ValueError):
        RipsParams(-1, 0, 0)


def test_plain_c6(load):
    pres, k = load("c6")
    kb = peripheral_ball(pres, k, 3)
    assert build_plain_rips(kb, 1, 3).counts() == {0: 6, 1: 6, 2: 0, 3: 0}
    X2 = build_plain_rips(kb, 2, 3)
    assert X2.counts() == {0: 6, 1: 12, 2: 8, 3: 0}
    # the missing edges are the antipodal pairs
    missing = {frozenset(p) for p in itertools.combinations(X2.labels, 2)} - labelled_edges(X2)
    assert missing == {frozenset(p) for p in (("e", "aaa"), ("a", "AA"), ("A", "aa"))}
    assert build_plain_rips(kb, 3, 5).counts()[5] == 1


def test_same_coset_clause(coned):
    for s in (4, 5):
        X, _ = rel(coned, "f2_rel_a", 6, 0, 0, s, 1)
        assert (frozenset(("e", "aaaaa")) in labelled_edges(X)) == (s >= 5)


def test_single_step_edge(coned):
    X, _ = rel(coned, "f2_rel_a", 6, 0, 1, 0, 1)
    assert frozenset(("e", "b")) in labelled_edges(X)
    X, _ = rel(coned, "f2_rel_a", 6, 0, 0, 0, 1)
    assert X.counts()[1] == 0


@pytest.mark.filterwarnings("ignore::relrips.errors.TruncationWarning")
def test_edge_tags_and_witnesses(coned):
    params = RipsParams(1, 2, 3, 1, 5)
    cb = coned("f2_rel_a", 5)
    X = build_relative_rips(cb.base, cb, params)
    tags = set(X.edge_tags.values())
    assert tags == {SAME_COSET, RELATIVE_GEODESIC}
    for (u, v), tag in list(X.edge_tags.items())[::37]:
        w = edge_witness(cb, params, u, v)
        if tag == SAME_COSET:
            assert isinstance(w, int) and w <= params.s
        else:
            assert isinstance(w, RelativePath)
            assert w.relative_length <= params.d and w.admissible(params.r)
    non_edges = [(u, v) for u in range(0, 60) for v in range(u + 1, 60) if (u, v) not in X.edge_tags]
    assert all(edge_witness(cb, params, u, v) is None for u, v in non_edges[:200])


def test_monotone_in_each_index(coned):
    base = (1, 2, 3)
    X0, _ = rel(coned, "f2_rel_a", 5, *base, k_max=1)
    for axis in range(3):
        bumped = list(base)
        bumped[axis] += 1
        X1, _ = rel(coned, "f2_rel_a", 5, *bumped, k_max=1)
        inclusion(X0, X1)  # raises on failure
        assert labelled_edges(X0) <= labelled_edges(X1)


def test_inclusion_failure(load):
    pres, k = load("c6")
    kb = peripheral_ball(pres, k, 3)
    X1, X2 = build_plain_rips(kb, 1, 2), build_plain_rips(kb, 2, 2)
    assert len(inclusion(X1, X2).image(1)) == 6
    assert inclusion(X2, X2).vertex_map == list(range(6))
    with pytest.raises(ContainmentError):
        inclusion(X2, X1)


def test_flag_property(coned):
    X, _ = rel(coned, "f2_rel_a", 4, 1, 3, 5, 3)
    edges = set(X.edges())
    tri = set(X.simplices[2])
    n = X.n_vertices
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    for u, v in edges:
        for w in adj[u] & adj[v]:
            if w > v:
                assert (u, v, w) in tri


@pytest.mark.parametrize("name", ["f2_rel_a", "z2_rel_a", "c6"])
def test_coset_copy(coned, load, name):
    pres, k = load(name)
    R = 4
    cb = coned(name, R)
    for s in range(0, 5):
        for r in (0, 1):
            if 3 * r - 1 > s:
                continue
            X = build_relative_rips(cb.base, cb, RipsParams(r, 2, s, 2, R))
            sub = coset_subcomplex(X, 0)
            plain = build_plain_rips(peripheral_ball(pres, k, R), s, 2)
            plain = plain.induced([v for v, lab in enumerate(plain.labels) if lab in set(sub.labels)])
            for j in range(3):
                assert sorted(map(sorted, sub.labelled(j))) == sorted(map(sorted, plain.labelled(j)))


def test_coset_copy_needs_small_r(coned):
    # with 3r - 1 > s the geodesic clause adds longer in-coset edges
    cb = coned("f2_rel_a", 4)
    X = build_relative_rips(cb.base, cb, RipsParams(1, 1, 0, 1, 4))
    sub = coset_subcomplex(X, 0)
    assert sub.counts()[1] > 0


def test_coset_subcomplex_translation(coned):
    cb = coned("f2_rel_a", 6)
    X = build_relative_rips(cb.base, cb, RipsParams(1, 2, 2, 2, 6))
    ident = coset_subcomplex(X, 0)
    b = cb.base.vertex("b")
    other = coset_subcomplex(X, cb.coset_of(b))
    shifted = sorted(tuple(sorted("b" + lab if lab != "e" else "b" for lab in s)) for s in ident.labelled(1)
                     if all(len(lab) <= 4 or lab == "e" for lab in s))
    mine = sorted(tuple(sorted(s)) for s in other.labelled(1) if all(len(lab) <= 5 for lab in s))
    assert shifted == mine
    single = [c for c in set(X.coset_ids.tolist()) if np.sum(X.coset_ids == c) == 1]
    assert single and coset_subcomplex(X, single[0]).counts()[1] == 0
    with pytest.raises(RelRipsError):
        coset_subcomplex(X, -5)


def test_truncation_caveat(coned):
    X, _ = rel(coned, "f2_rel_a", 4, 1, 3, 2, 1)
    assert X.params["caveats"]
    X, _ = rel(coned, "f2_rel_a", 4, 1, 2, 2, 1)
    assert X.params["caveats"] == []


def test_radius_mismatch(coned):
    cb = coned("f2_rel_a", 4)
    with pytest.raises(RelRipsError):
        build_relative_rips(cb.base, cb, RipsParams(1, 1, 1, 1, R=5))
