"""Finite balls in the Cayley graph and their peripheral cosets."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import ResourceLimitError
from .presentation import GroupPresentation, PeripheralSpec, Word, shortlex_key

DEFAULT_VERTEX_CAP = 2_000_000


def vertex_cap() -> int:
    return int(os.environ.get("RELRIPS_CAP_VERTICES", DEFAULT_VERTEX_CAP))


@dataclass(eq=False)
class CayleyBall:
    """Radius-R ball around the identity, vertices numbered in shortlex order.

    Normal forms are geodesic words, so shortlex order on vertices is BFS
    order with shortlex tie-breaking inside each sphere.
    """

    pres: GroupPresentation
    radius: int
    generators: tuple[int, ...]
    words: list[Word]
    adjacency: list[tuple[tuple[int, int], ...]]
    index: dict[Word, int] = field(repr=False)

    center = 0

    def __len__(self) -> int:
        return len(self.words)

    def vertex(self, v) -> int:
        """Accept a vertex index, a word, or word text."""
        if isinstance(v, (int, np.integer)):
            return int(v)
        if isinstance(v, str):
            v = self.pres.word(v)
        nf = self.pres.normal_form(tuple(v))
        try:
            return self.index[nf]
        except KeyError:
            raise KeyError(f"{self.pres.format(nf)} is outside the radius-{self.radius} ball") from None

    def label(self, v: int) -> str:
        return self.pres.format(self.words[v])

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.array([len(w) for w in self.words], np.int64)

    def on_boundary(self, v: int) -> bool:
        return len(self.words[v]) >= self.radius

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(len(self) + 1, np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adjacency])
        indices = np.array([w for a in self.adjacency for _, w in a], np.int64)
        return indptr, indices

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs graph distances inside the ball (int16)."""
        return kernels.all_pairs_bfs(*self.csr)

    def edges(self) -> list[tuple[int, int, int]]:
        """Undirected edges ``(u, v, g)`` with ``u < v``, g the label from u."""
        out = []
        for u, adj in enumerate(self.adjacency):
            for g, v in adj:
                if u < v:
                    out.append((u, v, g))
        return out

    def export_edge_list(self) -> str:
        header = {
            "group": self.pres.name,
            "radius": self.radius,
            "vertices": len(self),
        }
        lines = [json.dumps(header, sort_keys=True)]
        sym = self.pres.gens.symbols
        lines += [f"{u} {v} {sym[g]}" for u, v, g in self.edges()]
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        spheres = np.bincount(self.lengths, minlength=self.radius + 1)
        return {
            "group": self.pres.name,
            "radius": self.radius,
            "vertices": len(self),
            "edges": len(self.edges()),
            "sphere_sizes": [int(x) for x in spheres],
        }


def build_ball(
    p: GroupPresentation,
    R: int,
    generators: Sequence[int] | None = None,
    cap: int | None = None,
) -> CayleyBall:
    """Ball of radius R in the Cayley graph of ``p``.

    ``generators`` restricts the generating set (closed under inverses),
    which is how balls of the peripheral subgroup are built.
    """
    if R < 0:
        raise ValueError("radius must be non-negative")
    cap = vertex_cap() if cap is None else cap
    gens = tuple(range(len(p.gens))) if generators is None else tuple(sorted(generators))
    words: list[Word] = [()]
    index: dict[Word, int] = {(): 0}
    layer = [()]
    for k in range(1, R + 1):
        found = set()
        for w in layer:
            for g in gens:
                nf = p.normal_form(w + (g,))
                if len(nf) == k and nf not in index:
                    found.add(nf)
        layer = sorted(found, key=shortlex_key)
        if len(words) + len(layer) > cap:
            raise ResourceLimitError(
                f"ball of radius {R} exceeds the vertex cap of {cap}"
            )
        for w in layer:
            index[w] = len(words)
            words.append(w)
        if not layer:
            break
    adjacency = []
    for w in words:
        adj = []
        for g in gens:
            j = index.get(p.normal_form(w + (g,)))
            if j is not None:
                adj.append((g, j))
        adjacency.append(tuple(adj))
    return CayleyBall(p, R, gens, words, adjacency, index)


def peripheral_ball(p: GroupPresentation, k: PeripheralSpec, R: int, cap=None) -> CayleyBall:
    """Ball of radius R in the Cayley graph of K on its own generators."""
    return build_ball(p, R, k.generator_list(), cap)


@dataclass(eq=False)
class CosetTable:
    """Partition of ball vertices into K-cosets.

    ``coset_id[v]`` is the index of the shortlex-least ball vertex of v's
    coset; ``label[v]`` numbers the cosets 0, 1, ... in order of that
    representative.
    """

    coset_id: np.ndarray
    label: np.ndarray
    members: list[np.ndarray]

    @property
    def count(self) -> int:
        return len(self.members)

    def representatives(self) -> list[int]:
        return [int(m[0]) for m in self.members]

    def members_of(self, coset: int) -> np.ndarray:
        """Members of the coset whose representative is vertex ``coset``."""
        return self.members[int(self.label[coset])]


def coset_table(ball: CayleyBall, k: PeripheralSpec) -> CosetTable:
    p = ball.pres
    n = len(ball)
    # two ball vertices u, w share a coset iff u^-1 w is a K-element of
    # length <= 2R, so translating by the K-ball of radius 2R finds them all
    kwords = peripheral_ball(p, k, 2 * ball.radius).words
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    index = ball.index
    for v, w in enumerate(ball.words):
        for kw in kwords:
            j = index.get(p.normal_form(w + kw))
            if j is not None and j != v:
                a, b = find(v), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    roots = np.array([find(v) for v in range(n)], np.int64)
    reps = np.unique(roots)
    label = np.searchsorted(reps, roots)
    members = [np.flatnonzero(roots == r) for r in reps]
    return CosetTable(roots, label, members)


class BallDistance(NamedTuple):
    distance: int
    truncated: bool


def graph_distance(ball: CayleyBall, u, v) -> BallDistance:
    """Shortest-path length inside the ball.

    ``truncated`` is set when an endpoint lies on the boundary sphere; the
    ball is a subgraph, so the value can only overestimate the distance in
    the whole Cayley graph.
    """
    u, v = ball.vertex(u), ball.vertex(v)
    d = int(ball.distances[u, v])
    return BallDistance(d, ball.on_boundary(u) or ball.on_boundary(v))
