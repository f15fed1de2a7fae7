"""Finite flag simplicial complexes on ball vertices."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimitError

DEFAULT_CLIQUE_CAP = 5_000_000

Simplex = tuple[int, ...]


def clique_cap() -> int:
    return int(os.environ.get("RELRIPS_CAP_CLIQUES", DEFAULT_CLIQUE_CAP))


def flag_simplices(n: int, edges: Iterable[tuple[int, int]], k_max: int,
                   cap: int | None = None) -> list[list[Simplex]]:
    """All cliques with at most ``k_max + 1`` vertices, per dimension, sorted."""
    cap = clique_cap() if cap is None else cap
    higher = [0] * n
    for u, v in edges:
        if u == v:
            continue
        if u > v:
            u, v = v, u
        higher[u] |= 1 << v
    out: list[list[Simplex]] = [[(v,) for v in range(n)]]
    out.extend([] for _ in range(k_max))
    count = n
    if n > cap:
        raise ResourceLimitError(f"more than {cap} simplices")

    def grow(prefix: list[int], cand: int):
        nonlocal count
        dim = len(prefix)
        bucket = out[dim]
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            prefix.append(w)
            bucket.append(tuple(prefix))
            count += 1
            if count > cap:
                raise ResourceLimitError(f"more than {cap} simplices (flag completion)")
            if dim < k_max:
                nxt = cand & higher[w]
                if nxt:
                    grow(prefix, nxt)
            prefix.pop()

    if k_max >= 1:
        for v in range(n):
            if higher[v]:
                grow([v], higher[v])
    return out


@dataclass(eq=False)
class SimplicialComplex:
    """A flag complex truncated at dimension ``k_max``.

    ``simplices[j]`` lists the j-simplices as increasing vertex tuples in
    lexicographic order.  ``coset_ids`` (optional) assigns each vertex to a
    peripheral coset; ``edge_tags`` records why each edge is present.
    """

    labels: list[str]
    simplices: list[list[Simplex]]
    k_max: int
    coset_ids: np.ndarray | None = None
    edge_tags: dict[tuple[int, int], str] | None = None
    params: dict = field(default_factory=dict)
    _index: dict = field(default_factory=dict, repr=False)

    @classmethod
    def flag(cls, labels: Sequence[str], edges: Iterable[tuple[int, int]], k_max: int,
             cap: int | None = None, **kw) -> "SimplicialComplex":
        edges = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
        simplices = flag_simplices(len(labels), edges, k_max, cap)
        return cls(list(labels), simplices, k_max, **kw)

    @classmethod
    def from_simplices(cls, labels: Sequence[str], maximal: Iterable[Sequence[int]],
                       k_max: int | None = None, **kw) -> "SimplicialComplex":
        """Downward closure of the given simplices (not necessarily flag)."""
        faces: set[Simplex] = set()
        top = 0
        for s in maximal:
            s = tuple(sorted(s))
            top = max(top, len(s) - 1)
            n = len(s)
            for mask in range(1, 1 << n):
                faces.add(tuple(s[i] for i in range(n) if mask >> i & 1))
        faces.update((v,) for v in range(len(labels)))
        k_max = top if k_max is None else k_max
        simplices = [sorted(f for f in faces if len(f) == j + 1) for j in range(k_max + 1)]
        return cls(list(labels), simplices, k_max, **kw)

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        for j in range(len(self.simplices) - 1, -1, -1):
            if self.simplices[j]:
                return j
        return -1

    def edges(self) -> list[Simplex]:
        return self.simplices[1] if self.k_max >= 1 else []

    def count(self, j: int) -> int:
        return len(self.simplices[j]) if 0 <= j < len(self.simplices) else 0

    def counts(self) -> dict[int, int]:
        return {j: len(s) for j, s in enumerate(self.simplices)}

    def index(self, j: int) -> dict[Simplex, int]:
        idx = self._index.get(j)
        if idx is None:
            idx = {s: i for i, s in enumerate(self.simplices[j])}
            self._index[j] = idx
        return idx

    def __contains__(self, simplex) -> bool:
        s = tuple(sorted(simplex))
        j = len(s) - 1
        return 0 <= j <= self.k_max and s in self.index(j)

    def labelled(self, j: int) -> list[tuple[str, ...]]:
        lab = self.labels
        return [tuple(lab[v] for v in s) for s in self.simplices[j]]

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * len(s) for j, s in enumerate(self.simplices))

    def induced(self, vertices: Iterable[int]) -> "SimplicialComplex":
        """Full subcomplex on ``vertices``, relabelled 0..m-1 in increasing order."""
        keep = sorted(set(int(v) for v in vertices))
        new = {v: i for i, v in enumerate(keep)}
        simplices = [
            [tuple(new[v] for v in s) for s in layer if all(v in new for v in s)]
            for layer in self.simplices
        ]
        coset_ids = None if self.coset_ids is None else self.coset_ids[keep]
        tags = None
        if self.edge_tags is not None:
            tags = {(new[u], new[v]): t for (u, v), t in self.edge_tags.items()
                    if u in new and v in new}
        return SimplicialComplex([self.labels[v] for v in keep], simplices, self.k_max,
                                 coset_ids, tags, dict(self.params))

    def export(self) -> str:
        header = dict(self.params)
        header["vertices"] = self.n_vertices
        header["counts"] = {str(j): c for j, c in self.counts().items()}
        if self.edge_tags is not None:
            tally: dict[str, int] = {}
            for t in self.edge_tags.values():
                tally[t] = tally.get(t, 0) + 1
            header["edge_provenance"] = dict(sorted(tally.items()))
        lines = [json.dumps(header, sort_keys=True)]
        for layer in self.simplices:
            lines.extend(" ".join(map(str, s)) for s in layer)
        return "\n".join(lines) + "\n"
