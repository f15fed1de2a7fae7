import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from relrips.complex import SimplicialComplex, flag_simplices
from relrips.errors import ResourceLimitError


def test_flag_of_complete_graph():
    edges = list(itertools.combinations(range(5), 2))
    out = flag_simplices(5, edges, 4)
    assert [len(layer) for layer in out] == [5, 10, 10, 5, 1]
    assert out[2][0] == (0, 1, 2)


def test_truncation():
    edges = list(itertools.combinations(range(5), 2))
    X = SimplicialComplex.flag(list("abcde"), edges, 2)
    assert X.counts() == {0: 5, 1: 10, 2: 10}
    assert X.dim == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 9), st.floats(0.2, 0.9), st.integers(0, 10**6))
def test_cliques_match_networkx(n, p, seed):
    G = nx.gnp_random_graph(n, p, seed=seed)
    out = flag_simplices(n, G.edges(), 3)
    ref = {k: set() for k in range(4)}
    for clique in nx.enumerate_all_cliques(G):
        if len(clique) <= 4:
            ref[len(clique) - 1].add(tuple(sorted(clique)))
    for k in range(4):
        assert out[k] == sorted(ref[k])


def test_clique_cap(monkeypatch):
    edges = list(itertools.combinations(range(8), 2))
    with pytest.raises(ResourceLimitError):
        flag_simplices(8, edges, 3, cap=50)
    monkeypatch.setenv("RELRIPS_CAP_CLIQUES", "20")
    with pytest.raises(ResourceLimitError):
        SimplicialComplex.flag([str(i) for i in range(8)], edges, 3)


def test_closure_and_queries():
    X = SimplicialComplex.from_simplices(list("abcd"), [(0, 1, 2), (2, 3)])
    assert X.counts() == {0: 4, 1: 4, 2: 1}
    assert (2, 1, 0) in X and (0, 3) not in X
    assert X.euler_characteristic() == 1
    assert X.labelled(2) == [("a", "b", "c")]
    sub = X.induced([1, 2, 3])
    assert sub.labels == ["b", "c", "d"]
    assert sub.simplices[1] == [(0, 1), (1, 2)]


def test_export_format():
    X = SimplicialComplex.flag(list("abc"), [(0, 1), (1, 2), (0, 2)], 2,
                               edge_tags={(0, 1): "x", (1, 2): "x", (0, 2): "y"},
                               params={"s": 1})
    header, *rows = X.export().splitlines()
    meta = json.loads(header)
    assert meta["counts"] == {"0": 3, "1": 3, "2": 1}
    assert meta["edge_provenance"] == {"x": 2, "y": 1}
    assert rows == ["0", "1", "2", "0 1", "0 2", "1 2", "0 1 2"]
