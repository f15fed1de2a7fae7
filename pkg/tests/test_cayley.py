import numpy as np
import pytest

from relrips.cayley import build_ball, coset_table, graph_distance, peripheral_ball
from relrips.errors import ResourceLimitError

from oracles import f2_ball_sizes


def test_f2_ball_sizes(load):
    pres, _ = load("f2")
    sizes = [len(build_ball(pres, R)) for R in range(4)]
    assert sizes == [1, 5, 17, 53] == f2_ball_sizes(3)
    assert all(n == 2 * 3 ** R - 1 for R, n in enumerate(sizes) if R)


def test_z2_and_c6_sizes(load):
    z2, _ = load("z2")
    assert [len(build_ball(z2, R)) for R in range(4)] == [1, 5, 13, 25]
    c6, _ = load("c6")
    assert [len(build_ball(c6, R)) for R in range(5)] == [1, 3, 5, 6, 6]


def test_vertices_in_shortlex_order(load):
    pres, _ = load("f2")
    ball = build_ball(pres, 3)
    keys = [(len(w), w) for w in ball.words]
    assert keys == sorted(keys)
    assert ball.label(0) == "e"
    assert ball.vertex("ab") == ball.index[pres.word("ab")]
    with pytest.raises(KeyError):
        ball.vertex("abab")


def test_edges_and_distances(load):
    pres, _ = load("f2")
    ball = build_ball(pres, 3)
    assert len(ball.edges()) == len(ball) - 1  # a tree
    assert graph_distance(ball, "ab", "aB").distance == 2
    assert graph_distance(ball, "e", "a").truncated is False
    assert graph_distance(ball, "abb", "e").truncated is True
    header, *lines = ball.export_edge_list().splitlines()
    assert len(lines) == len(ball.edges())


def test_vertex_cap(load, monkeypatch):
    pres, _ = load("f2")
    with pytest.raises(ResourceLimitError):
        build_ball(pres, 4, cap=50)
    monkeypatch.setenv("RELRIPS_CAP_VERTICES", "20")
    with pytest.raises(ResourceLimitError):
        build_ball(pres, 3)


def test_cosets_of_a_in_f2(load):
    pres, k = load("f2_rel_a")
    ball = build_ball(pres, 3)
    table = coset_table(ball, k)
    ident = table.members_of(0)
    assert sorted(ball.label(v) for v in ident) == sorted(["e", "a", "A", "aa", "AA", "aaa", "AAA"])
    # every coset is a trailing run of a's or A's on a common prefix
    for mem in table.members:
        prefixes = {ball.label(int(v)).rstrip("aA").replace("e", "") for v in mem}
        assert len(prefixes) == 1
    assert table.count == len({pres.gens.format(w).rstrip("aA") for w in ball.words})


def test_peripheral_ball(load):
    pres, k = load("z2_rel_a")
    kb = peripheral_ball(pres, k, 3)
    assert [kb.label(v) for v in range(len(kb))] == ["e", "a", "A", "aa", "AA", "aaa", "AAA"]
    assert np.array_equal(kb.distances[0], [0, 1, 1, 2, 2, 3, 3])
