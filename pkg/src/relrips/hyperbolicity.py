"""Empirical hyperbolicity and bounded-coset-penetration constants on a ball.

Both constants are computed on finite balls and are therefore lower bounds
for the constants of the whole group ("empirical at radius R").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import networkx as nx
import numpy as np

from . import kernels
from .cayley import CayleyBall
from .coned import ConedBall, path_cap
from .errors import NoInteriorPairsError, RelRipsError, ResourceLimitError

SAMPLING_THRESHOLD = 2000


@dataclass(frozen=True)
class DeltaEstimate:
    delta: Fraction
    method: str = "four-point"
    vertex_sample: str = "all"
    boundary_margin: int = 0
    seed: int | None = None
    samples: int | None = None
    vertices: int = 0
    blocks: int = 1
    radius: int | None = None

    @property
    def exact(self) -> bool:
        return self.vertex_sample == "all"

    def to_json(self) -> dict:
        return {
            "delta": str(self.delta),
            "method": self.method,
            "vertex_sample": self.vertex_sample,
            "boundary_margin": self.boundary_margin,
            "seed": self.seed,
            "samples": self.samples,
            "vertices": self.vertices,
            "blocks": self.blocks,
            "radius": self.radius,
            "exact": self.exact,
            "caveat": f"empirical at radius {self.radius}" if self.radius is not None else None,
        }


def _as_graph(graph) -> tuple[np.ndarray, nx.Graph | None, int | None, list | None]:
    """(distance matrix, networkx graph or None, radius, vertex word lengths)."""
    if isinstance(graph, ConedBall):
        G = nx.Graph()
        G.add_nodes_from(range(len(graph)))
        G.add_edges_from((u, v) for u, v, _ in graph.base.edges())
        G.add_edges_from(graph.coset_edges)
        return graph.distances, G, graph.base.radius, list(graph.base.lengths)
    if isinstance(graph, CayleyBall):
        G = nx.Graph()
        G.add_nodes_from(range(len(graph)))
        G.add_edges_from((u, v) for u, v, _ in graph.edges())
        return graph.distances, G, graph.radius, list(graph.lengths)
    if isinstance(graph, nx.Graph):
        try:
            nodes = sorted(graph.nodes())
        except TypeError:  # mixed node types
            nodes = list(graph.nodes())
        relabel = {v: i for i, v in enumerate(nodes)}
        G = nx.relabel_nodes(graph, relabel)
        n = len(nodes)
        indptr = np.zeros(n + 1, np.int64)
        adj = [sorted(G.neighbors(i)) for i in range(n)]
        indptr[1:] = np.cumsum([len(a) for a in adj])
        indices = np.array([w for a in adj for w in a], np.int64)
        return kernels.all_pairs_bfs(indptr, indices), G, None, None
    D = np.asarray(graph)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise TypeError("expected a ball, a networkx graph or a square distance matrix")
    return D, None, None, None


def delta_four_point(graph, sample="all", boundary_margin: int = 0,
                     decompose: bool = True) -> DeltaEstimate:
    """Four-point delta: half the largest gap between the two largest pair sums.

    ``sample`` is ``"all"`` (exact) or ``(count, seed)`` for random
    quadruples.  In exact mode the graph is split into biconnected
    components first; blocks are isometric subgraphs and the four-point
    delta of a graph is the maximum over its blocks.
    """
    D, G, radius, lengths = _as_graph(graph)
    n = D.shape[0]
    if n and (D < 0).any():
        raise RelRipsError("four-point delta needs a connected graph")
    D = np.ascontiguousarray(D)
    verts = np.arange(n)
    if boundary_margin:
        if lengths is None:
            raise ValueError("boundary_margin needs a ball")
        verts = np.array([v for v in range(n) if lengths[v] <= radius - boundary_margin], np.int64)

    if sample != "all":
        count, seed = sample
        rng = np.random.default_rng(seed)
        quads = verts[rng.integers(0, verts.shape[0], size=(int(count), 4))] if verts.size else np.zeros((0, 4), np.int64)
        twice = kernels.four_point_quads(D, quads.astype(np.int64))
        return DeltaEstimate(Fraction(twice, 2), vertex_sample="random",
                             boundary_margin=boundary_margin, seed=seed, samples=int(count),
                             vertices=int(verts.shape[0]), radius=radius)

    if decompose and G is not None and not boundary_margin and n >= 4:
        blocks = [np.array(sorted(b), np.int64) for b in nx.biconnected_components(G)]
        blocks.sort(key=lambda b: (len(b), tuple(b)))
    else:
        blocks = [verts.astype(np.int64)]
    twice = 0
    for b in blocks:
        if b.shape[0] >= 4:
            twice = max(twice, kernels.four_point_max(D, b))
    return DeltaEstimate(Fraction(twice, 2), boundary_margin=boundary_margin,
                         vertices=int(verts.shape[0]), blocks=len(blocks), radius=radius)


# ---------------------------------------------------------------------------
# bounded coset penetration


@dataclass(frozen=True)
class CosetVisit:
    entry: int
    exit: int
    travel: int


@dataclass(frozen=True)
class QuasiPath:
    vertices: tuple[int, ...]
    visits: dict = field(compare=False, repr=False)


@dataclass(frozen=True)
class BcpWitness:
    clause: int
    coset: int
    value: int
    first: tuple[int, ...]
    second: tuple[int, ...]

    def to_json(self, cb: ConedBall) -> dict:
        lab = cb.base.label
        return {
            "clause": self.clause,
            "coset": lab(self.coset),
            "value": self.value,
            "paths": [[lab(v) for v in self.first], [lab(v) for v in self.second]],
        }


@dataclass(frozen=True)
class BcpEstimate:
    T: Fraction
    r_hat: int
    witnesses: tuple[BcpWitness, ...]
    radius: int
    d_max: int
    sources: tuple[int, ...]
    paths_examined: int
    pairs_examined: int

    def to_json(self, cb: ConedBall) -> dict:
        return {
            "T": str(self.T),
            "r_hat": self.r_hat,
            "radius": self.radius,
            "d_max": self.d_max,
            "sources": [cb.base.label(s) for s in self.sources],
            "paths_examined": self.paths_examined,
            "pairs_examined": self.pairs_examined,
            "witnesses": [w.to_json(cb) for w in self.witnesses],
            "caveat": f"empirical at radius {self.radius}: lower bound for r_BCP(T)",
        }


def _visits(cb: ConedBall, path: tuple[int, ...]) -> dict[int, CosetVisit]:
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for v in path:
        c = cb.coset_of(v)
        first.setdefault(c, v)
        last[c] = v
    return {c: CosetVisit(first[c], last[c], cb.travel(first[c], last[c])) for c in first}


def quasi_geodesics_from(cb: ConedBall, source: int, T, d_max: int,
                         cap: int | None = None) -> list[tuple[int, ...]]:
    """Reduced coned-off paths from ``source`` that are T-relative quasi-geodesics.

    A reduced path is loop-free and never takes two consecutive steps inside
    one coset (such steps merge when a Cayley-graph path is projected).
    """
    T = Fraction(T)
    cap = path_cap() if cap is None else cap
    D = cb.distances
    cid = cb.cosets.coset_id
    nbrs = {}
    out: list[tuple[int, ...]] = []
    path = [source]
    on_path = {source}

    def grow():
        if len(out) >= cap:
            raise ResourceLimitError(f"more than {cap} quasi-geodesics examined")
        out.append(tuple(path))
        if len(path) - 1 >= d_max:
            return
        cur = path[-1]
        if cur not in nbrs:
            nbrs[cur] = cb.neighbors(cur)
        prev_same = len(path) >= 2 and cid[path[-2]] == cid[cur]
        t = len(path)
        for w in nbrs[cur]:
            if w in on_path or (prev_same and cid[w] == cid[cur]):
                continue
            if any(t - i > T * int(D[path[i], w]) for i in range(t)):
                continue
            path.append(w)
            on_path.add(w)
            grow()
            path.pop()
            on_path.discard(w)

    grow()
    return out


def _compare(cb: ConedBall, p1: QuasiPath, p2: QuasiPath) -> tuple[int, int, int]:
    """(needed r, clause, coset) for one ordered pair of paths."""
    best = (0, 0, -1)
    v1, v2 = p1.visits, p2.visits
    for c, a in v1.items():
        b = v2.get(c)
        if b is None:
            if a.travel > best[0]:
                best = (a.travel, 1, c)
        else:
            gap = max(cb.travel(a.entry, b.entry), cb.travel(a.exit, b.exit))
            if gap > best[0]:
                best = (gap, 2, c)
    return best


def estimate_rbcp(cb: ConedBall, T, d_max: int, sources="identity",
                  cap: int | None = None) -> BcpEstimate:
    """Least r satisfying both coset-penetration clauses on all examined pairs.

    Pairs of reduced T-relative quasi-geodesics with a common start in
    ``sources`` and a common end off the boundary sphere are compared.  By
    left-invariance the identity is the natural (and default) start.
    """
    T = Fraction(T)
    R = cb.base.radius
    lengths = cb.base.lengths
    if sources == "identity":
        srcs = [0]
    elif sources == "interior":
        srcs = [v for v in range(len(cb)) if lengths[v] <= R - d_max]
    else:
        srcs = sorted(cb.base.vertex(s) for s in sources)
    budget = path_cap() if cap is None else cap

    groups: dict[tuple[int, int], list[QuasiPath]] = {}
    n_paths = 0
    for s in srcs:
        for path in quasi_geodesics_from(cb, s, T, d_max, budget - n_paths):
            end = path[-1]
            if end == s or lengths[end] >= R:
                continue
            n_paths += 1
            groups.setdefault((s, end), []).append(QuasiPath(path, _visits(cb, path)))
    if not groups:
        raise NoInteriorPairsError(
            f"no interior endpoint pairs at radius {R} with relative length <= {d_max}"
        )

    r_hat = 0
    witnesses: list[BcpWitness] = []
    n_pairs = 0
    for key in sorted(groups):
        paths = groups[key]
        for p1 in paths:
            for p2 in paths:
                n_pairs += 1
                need, clause, coset = _compare(cb, p1, p2)
                if need > r_hat:
                    r_hat = need
                    witnesses = []
                if need == r_hat and need > 0 and len(witnesses) < 8:
                    witnesses.append(BcpWitness(clause, coset, need, p1.vertices, p2.vertices))
    return BcpEstimate(T, r_hat, tuple(witnesses), R, d_max, tuple(srcs), n_paths, n_pairs)


@dataclass(frozen=True)
class ParamTriple:
    r: int
    d: int
    s: int
    delta: DeltaEstimate | None = None
    bcp: BcpEstimate | None = None

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r, self.d, self.s)

    def satisfies_regime(self) -> bool:
        """d > 4 delta + 2, r > r_hat(4d), s > 4r as exact inequalities."""
        ok = self.s > 4 * self.r
        if self.delta is not None:
            ok = ok and self.d > 4 * self.delta.delta + 2
        if self.bcp is not None:
            ok = ok and self.r > self.bcp.r_hat
        return ok

    def to_json(self, cb: ConedBall | None = None) -> dict:
        out = {"r": self.r, "d": self.d, "s": self.s}
        if self.delta is not None:
            out["delta"] = self.delta.to_json()
        if self.bcp is not None and cb is not None:
            out["bcp"] = self.bcp.to_json(cb)
        return out


def derive_params(delta: DeltaEstimate, cb: ConedBall, d_max_cap: int = 3,
                  sources="identity") -> ParamTriple:
    """Smallest integer triple with d > 4 delta + 2, r > r_hat(4d), s > 4r."""
    d = math.floor(4 * delta.delta) + 3
    bcp = estimate_rbcp(cb, 4 * d, d_max_cap, sources)
    r = bcp.r_hat + 1
    return ParamTriple(r, d, 4 * r + 1, delta, bcp)


def rhat_trend(balls: Iterable[ConedBall], T, d_max: int) -> list[tuple[int, int]]:
    """``(radius, r_hat)`` for each ball, e.g. to watch r_hat grow with R."""
    return [(cb.base.radius, estimate_rbcp(cb, T, d_max).r_hat) for cb in balls]
