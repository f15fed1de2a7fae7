from fractions import Fraction

import networkx as nx
import pytest

from relrips.cayley import build_ball
from relrips.coned import build_coned_ball
from relrips.errors import NoInteriorPairsError
from relrips.hyperbolicity import (delta_four_point, derive_params, estimate_rbcp,
                                   quasi_geodesics_from, rhat_trend)

from oracles import f2_tree, four_point_delta


def test_delta_on_trees_is_zero(load):
    pres, _ = load("f2")
    for R in range(0, 6):
        assert delta_four_point(build_ball(pres, R)).delta == 0
    assert four_point_delta(f2_tree(3)) == 0


def test_delta_cycle(load):
    pres, _ = load("c6")
    est = delta_four_point(build_ball(pres, 3))
    assert est.delta == 1 == four_point_delta(nx.cycle_graph(6))
    assert est.exact


@pytest.mark.parametrize("n", [4, 5, 7, 8, 9])
def test_delta_cycles_match_brute_force(n):
    G = nx.cycle_graph(n)
    assert delta_four_point(G).delta == four_point_delta(G)


def test_decomposition_does_not_change_delta(load):
    pres, _ = load("z2")
    ball = build_ball(pres, 3)
    full = delta_four_point(ball, decompose=False).delta
    assert delta_four_point(ball).delta == full
    G = nx.petersen_graph()
    G.add_edge(0, "tail")
    assert delta_four_point(G).delta == four_point_delta(G)


def test_sampled_delta_is_lower_bound(load):
    pres, _ = load("z2")
    ball = build_ball(pres, 4)
    exact = delta_four_point(ball).delta
    est = delta_four_point(ball, sample=(2000, 3))
    assert est.delta <= exact
    assert not est.exact
    assert delta_four_point(ball, sample=(2000, 3)).delta == est.delta


def test_coned_delta(coned):
    assert delta_four_point(coned("f2_rel_a", 6)).delta == 0
    assert delta_four_point(coned("z2_rel_a", 4)).delta == 1


def test_quasi_geodesics_are_reduced(coned):
    cb = coned("f2_rel_a", 4)
    cid = cb.cosets.coset_id
    paths = quasi_geodesics_from(cb, 0, 2, 3)
    assert paths[0] == (0,)
    for p in paths:
        assert len(set(p)) == len(p)
        assert not any(cid[a] == cid[b] == cid[c] for a, b, c in zip(p, p[1:], p[2:]))


def test_rbcp_free_product_is_small(coned):
    est = estimate_rbcp(coned("f2_rel_a", 5), 2, 3)
    assert est.r_hat == 0
    assert est.pairs_examined > 0


def test_rbcp_requires_interior_pairs(coned):
    with pytest.raises(NoInteriorPairsError):
        estimate_rbcp(coned("f2_rel_a", 1), 2, 3)


def test_rbcp_grows_on_z2(coned):
    trend = rhat_trend([coned("z2_rel_a", R) for R in (3, 4, 5)], 2, 3)
    values = [r for _, r in trend]
    assert values == sorted(values) and len(set(values)) == 3


def test_derive_params_regime(coned):
    cb = coned("f2_rel_a", 6)
    pt = derive_params(delta_four_point(cb), cb)
    assert pt.as_tuple() == (1, 3, 5)
    assert pt.satisfies_regime()
    assert pt.d > 4 * pt.delta.delta + 2
    assert pt.bcp.T == 4 * pt.d
    assert pt.r > pt.bcp.r_hat and pt.s > 4 * pt.r


def test_estimates_serialize(coned):
    cb = coned("z2_rel_a", 4)
    pt = derive_params(delta_four_point(cb), cb)
    out = pt.to_json(cb)
    assert out["delta"]["delta"] == "1"
    assert Fraction(out["bcp"]["T"]) == 4 * pt.d
