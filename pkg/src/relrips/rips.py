"""Relative Rips complexes Rips_{r,d,s}(G, K), plain Rips complexes of K,
coset subcomplexes and the inclusions along the filtration."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cayley import CayleyBall
from .complex import SimplicialComplex
from .coned import ConedBall, RelativePath, enumerate_relative_geodesics
from .errors import ContainmentError, RelRipsError

SAME_COSET = "same-coset"
RELATIVE_GEODESIC = "relative-geodesic"


@dataclass(frozen=True, order=True)
class RipsParams:
    """Filtration index.  Ordering is the dictionary order on (r, d, s)."""

    r: int
    d: int
    s: int
    k_max: int = field(default=3, compare=False)
    R: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if min(self.r, self.d, self.s) < 0:
            raise ValueError("r, d and s must be non-negative")
        if self.k_max < 0:
            raise ValueError("k_max must be non-negative")

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.r, self.d, self.s)

    def to_json(self) -> dict:
        return {"r": self.r, "d": self.d, "s": self.s, "k_max": self.k_max, "R": self.R}


def dk_matrix(cb: ConedBall) -> np.ndarray:
    """d_K between same-coset vertices, -1 for pairs in different cosets."""
    n = len(cb)
    M = np.full((n, n), -1, np.int64)
    for mem, block in zip(cb.cosets.members, cb.dk_blocks):
        M[np.ix_(mem, mem)] = block
    return M


def relative_edge_masks(cb: ConedBall, params: RipsParams) -> tuple[np.ndarray, np.ndarray]:
    """Boolean matrices for the two edge clauses (diagonal cleared).

    The geodesic clause holds when some relative geodesic of length at most
    d has admissible travel, i.e. ``D <= d`` and the least admissible r is
    at most ``r``.
    """
    D, RN = cb.tables
    dk = dk_matrix(cb)
    same = (dk >= 0) & (dk <= params.s)
    geo = (D >= 0) & (D <= params.d) & (RN <= params.r)
    np.fill_diagonal(same, False)
    np.fill_diagonal(geo, False)
    return same, geo


def trustworthy_depth(ball: CayleyBall) -> int:
    """Largest d for which relative geodesics between interior vertices stay
    well inside the ball."""
    return ball.radius // 2


def build_relative_rips(ball: CayleyBall, cb: ConedBall, params: RipsParams,
                        cap: int | None = None) -> SimplicialComplex:
    if cb.base is not ball:
        raise RelRipsError("the coned ball was built on a different Cayley ball")
    if params.R is not None and params.R != ball.radius:
        raise RelRipsError(f"parameters are for R={params.R} but the ball has R={ball.radius}")
    same, geo = relative_edge_masks(cb, params)
    us, vs = np.nonzero(np.triu(same | geo, 1))
    tags = {}
    for u, v in zip(us.tolist(), vs.tolist()):
        tags[(u, v)] = SAME_COSET if same[u, v] else RELATIVE_GEODESIC
    caveats = []
    if params.d > trustworthy_depth(ball):
        caveats.append(
            f"d={params.d} exceeds the trustworthy depth {trustworthy_depth(ball)} "
            f"of the radius-{ball.radius} ball; geodesic edges near the boundary may be missing"
        )
    meta = {
        "kind": "relative",
        "group": ball.pres.name,
        "r": params.r, "d": params.d, "s": params.s,
        "k_max": params.k_max, "R": ball.radius,
        "caveats": caveats,
    }
    labels = [ball.label(v) for v in range(len(ball))]
    return SimplicialComplex.flag(labels, list(tags), params.k_max, cap,
                                  coset_ids=cb.cosets.coset_id.copy(), edge_tags=tags,
                                  params=meta)


def edge_witness(cb: ConedBall, params: RipsParams, u: int, v: int) -> RelativePath | int | None:
    """Re-derive why (u, v) is an edge.

    Returns the d_K distance for a same-coset edge, the first admissible
    relative geodesic otherwise, and None when neither clause holds.
    """
    if cb.same_coset(u, v):
        t = cb.travel(u, v)
        if t <= params.s:
            return t
    for path in enumerate_relative_geodesics(cb, u, v, params.d):
        if path.admissible(params.r):
            return path
    return None


def build_plain_rips(k_ball: CayleyBall, s: int, k_max: int = 3,
                     cap: int | None = None) -> SimplicialComplex:
    """Rips_s(K) on a ball of K in its own word metric."""
    if s < 0:
        raise ValueError("s must be non-negative")
    # distances inside the ball can overshoot near its boundary, so d_K is
    # read off normal forms (which are geodesic) instead
    p = k_ball.pres
    words = k_ball.words
    inv = p.gens.invert
    n = len(k_ball)
    edges = []
    for i in range(n):
        wi = inv(words[i])
        for j in range(i + 1, n):
            if len(p.normal_form(wi + words[j])) <= s:
                edges.append((i, j))
    labels = [k_ball.label(v) for v in range(n)]
    meta = {"kind": "plain", "group": p.name, "s": s, "k_max": k_max, "R": k_ball.radius,
            "caveats": []}
    return SimplicialComplex.flag(labels, edges, k_max, cap, params=meta)


def coset_subcomplex(X: SimplicialComplex, coset: int) -> SimplicialComplex:
    """Full subcomplex on the vertices of one coset (given by its id)."""
    if X.coset_ids is None:
        raise RelRipsError("complex carries no coset table")
    members = np.flatnonzero(X.coset_ids == coset)
    if members.size == 0:
        raise RelRipsError(f"unknown coset {coset}")
    sub = X.induced(members)
    sub.params = dict(X.params, coset=X.labels[int(coset)])
    return sub


@dataclass(eq=False)
class InclusionMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: list[int]

    def image(self, j: int) -> list[tuple[int, ...]]:
        f = self.vertex_map
        return [tuple(sorted(f[v] for v in s)) for s in self.source.simplices[j]]


def inclusion(Xa: SimplicialComplex, Xb: SimplicialComplex) -> InclusionMap:
    """Identity-on-labels map Xa -> Xb; every simplex must land in Xb."""
    where = {lab: i for i, lab in enumerate(Xb.labels)}
    try:
        vmap = [where[lab] for lab in Xa.labels]
    except KeyError as exc:
        raise ContainmentError(f"vertex {exc.args[0]} is missing from the target") from None
    inc = InclusionMap(Xa, Xb, vmap)
    top = min(Xa.k_max, Xb.k_max)
    for j in range(1, top + 1):
        idx = Xb.index(j)
        for s, img in zip(Xa.simplices[j], inc.image(j)):
            if img not in idx:
                lab = ",".join(Xa.labels[v] for v in s)
                raise ContainmentError(f"simplex [{lab}] is not in the target complex")
    return inc


def relative_rips_edges(cb: ConedBall, params: RipsParams) -> list[tuple[int, int]]:
    """Sorted edge list without building the complex."""
    same, geo = relative_edge_masks(cb, params)
    us, vs = np.nonzero(np.triu(same | geo, 1))
    return list(zip(us.tolist(), vs.tolist()))


__all__ = [
    "RipsParams", "build_relative_rips", "build_plain_rips", "coset_subcomplex",
    "InclusionMap", "inclusion", "edge_witness", "relative_rips_edges", "dk_matrix",
    "SAME_COSET", "RELATIVE_GEODESIC",
]
