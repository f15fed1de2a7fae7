"""The coned-off Cayley graph on a ball, relative paths and relative geodesics.

Coset cones are not materialized: every pair of vertices in one K-coset is
joined by an edge.  Travel inside a coset is measured by d_K between the
vertices where a path enters and leaves it.
"""

from __future__ import annotations

import itertools
import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import kernels
from .cayley import BallDistance, CayleyBall, CosetTable, coset_table
from .errors import RelRipsError, ResourceLimitError, TruncationWarning
from .presentation import PeripheralSpec

DEFAULT_PATH_CAP = 100_000


def path_cap() -> int:
    return int(os.environ.get("RELRIPS_CAP_PATHS", DEFAULT_PATH_CAP))


@dataclass(eq=False)
class ConedBall:
    base: CayleyBall
    k: PeripheralSpec
    cosets: CosetTable

    @property
    def pres(self):
        return self.base.pres

    def __len__(self) -> int:
        return len(self.base)

    def coset_of(self, v: int) -> int:
        """Canonical coset id (index of the shortlex-least member)."""
        return int(self.cosets.coset_id[v])

    def same_coset(self, u: int, v: int) -> bool:
        return self.cosets.coset_id[u] == self.cosets.coset_id[v]

    @cached_property
    def _positions(self) -> np.ndarray:
        pos = np.empty(len(self), np.int64)
        for mem in self.cosets.members:
            pos[mem] = np.arange(mem.shape[0])
        return pos

    @cached_property
    def dk_blocks(self) -> list[np.ndarray]:
        """Per-coset matrices of d_K between members (coset label order)."""
        p = self.pres
        words = self.base.words
        inv = p.gens.invert
        blocks = []
        for mem in self.cosets.members:
            m = mem.shape[0]
            B = np.zeros((m, m), np.int64)
            for i, j in itertools.combinations(range(m), 2):
                B[i, j] = B[j, i] = len(p.normal_form(inv(words[mem[i]]) + words[mem[j]]))
            blocks.append(B)
        return blocks

    def travel(self, u: int, v: int) -> int:
        """d_K(u, v) for two vertices of one coset."""
        if not self.same_coset(u, v):
            raise RelRipsError("travel is only defined inside one coset")
        c = int(self.cosets.label[u])
        pos = self._positions
        return int(self.dk_blocks[c][pos[u], pos[v]])

    @cached_property
    def coset_edges(self) -> list[tuple[int, int]]:
        """Every same-coset pair ``(u, v)``, ``u < v``."""
        out = []
        for mem in self.cosets.members:
            out.extend((int(a), int(b)) for a, b in itertools.combinations(mem, 2))
        return sorted(out)

    def added_edges(self) -> list[tuple[int, int]]:
        """Coset edges that are not already edges of the Cayley graph."""
        gamma = {(u, v) for u, v, _ in self.base.edges()}
        return [e for e in self.coset_edges if e not in gamma]

    @cached_property
    def _nonk_csr(self) -> tuple[np.ndarray, np.ndarray]:
        sub = self.k.sub_gens
        adj = [[w for g, w in a if g not in sub] for a in self.base.adjacency]
        indptr = np.zeros(len(adj) + 1, np.int64)
        indptr[1:] = np.cumsum([len(a) for a in adj])
        indices = np.array([w for a in adj for w in a], np.int64)
        return indptr, indices

    def kernel_arrays(self) -> tuple[np.ndarray, ...]:
        members = self.cosets.members
        coset_ptr = np.zeros(len(members) + 1, np.int64)
        coset_ptr[1:] = np.cumsum([m.shape[0] for m in members])
        flat_members = np.concatenate(members) if members else np.zeros(0, np.int64)
        sizes = np.array([m.shape[0] ** 2 for m in members], np.int64)
        dk_offset = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
        dk_flat = (np.concatenate([b.ravel() for b in self.dk_blocks])
                   if members else np.zeros(0, np.int64))
        nk_indptr, nk_indices = self._nonk_csr
        return (nk_indptr, nk_indices, self.cosets.label.astype(np.int64), coset_ptr,
                flat_members.astype(np.int64), self._positions, dk_offset,
                dk_flat.astype(np.int64))

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """``(relative distances, least admissible r)``, see kernels.coned_tables."""
        return kernels.coned_tables(*self.kernel_arrays())

    @property
    def distances(self) -> np.ndarray:
        return self.tables[0]

    def neighbors(self, u: int) -> list[int]:
        """Neighbors of u in the coned-off graph, in index order."""
        sub = self.k.sub_gens
        out = {w for g, w in self.base.adjacency[u] if g not in sub}
        out.update(int(w) for w in self.cosets.members_of(self.coset_of(u)))
        out.discard(u)
        return sorted(out)

    def adjacent(self, u: int, v: int) -> bool:
        if u == v:
            return False
        if self.same_coset(u, v):
            return True
        return any(w == v for _, w in self.base.adjacency[u])

    def is_interior(self, vertices: Sequence[int], depth: int) -> bool:
        R = self.base.radius
        return all(len(self.base.words[v]) <= R - depth for v in vertices)

    def summary(self) -> dict:
        sizes = [int(m.shape[0]) for m in self.cosets.members]
        return {
            "group": self.pres.name,
            "radius": self.base.radius,
            "vertices": len(self),
            "cosets": len(sizes),
            "largest_coset": max(sizes) if sizes else 0,
            "coset_edges": len(self.coset_edges),
            "added_edges": len(self.added_edges()),
        }


def build_coned_ball(ball: CayleyBall, k: PeripheralSpec) -> ConedBall:
    return ConedBall(ball, k, coset_table(ball, k))


def relative_distance(cb: ConedBall, u, v) -> BallDistance:
    u, v = cb.base.vertex(u), cb.base.vertex(v)
    d = int(cb.distances[u, v])
    return BallDistance(d, cb.base.on_boundary(u) or cb.base.on_boundary(v))


@dataclass(frozen=True)
class LedgerEntry:
    coset: int
    entry: int
    exit: int
    travel: int

    @property
    def reduced(self) -> bool:
        return self.travel == 0


@dataclass(frozen=True)
class RelativePath:
    projected: tuple[int, ...]
    ledger: tuple[LedgerEntry, ...]
    steps: tuple[int, ...] | None = field(default=None, compare=False)

    @property
    def relative_length(self) -> int:
        return len(self.projected) - 1

    @property
    def start(self) -> int:
        return self.projected[0]

    @property
    def end(self) -> int:
        return self.projected[-1]

    def is_end_entry(self, e: LedgerEntry) -> bool:
        """Whether the ledger entry lies in the coset of the start or end point."""
        return e.entry == self.start or e.exit == self.end

    def required_r(self) -> int:
        """Least r for which the path's coset travel is admissible."""
        need = 0
        for e in self.ledger:
            need = max(need, e.travel // 3 + 1 if self.is_end_entry(e) else e.travel // 2 + 1)
        return need

    def admissible(self, r: int) -> bool:
        """Travel less than 3r in the end cosets and less than 2r elsewhere."""
        return all(
            e.travel < (3 * r if self.is_end_entry(e) else 2 * r) for e in self.ledger
        )

    def to_json(self, cb: ConedBall) -> dict:
        lab = cb.base.label
        return {
            "projected": [lab(v) for v in self.projected],
            "relative_length": self.relative_length,
            "ledger": [
                {"coset": lab(e.coset), "entry": lab(e.entry), "exit": lab(e.exit),
                 "travel": e.travel}
                for e in self.ledger
            ],
        }


def _loop_erase(seq: list[int]) -> list[int]:
    out: list[int] = []
    pos: dict[int, int] = {}
    for v in seq:
        if v in pos:
            cut = pos[v]
            for w in out[cut + 1:]:
                del pos[w]
            del out[cut + 1:]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def _collapse_runs(cb: ConedBall, seq: list[int]) -> list[int]:
    out: list[int] = []
    i = 0
    cid = cb.cosets.coset_id
    while i < len(seq):
        j = i
        while j + 1 < len(seq) and cid[seq[j + 1]] == cid[seq[i]]:
            j += 1
        out.append(seq[i])
        if seq[j] != seq[i]:
            out.append(seq[j])
        i = j + 1
    return out


def _ledger(cb: ConedBall, projected: Sequence[int]) -> tuple[LedgerEntry, ...]:
    out = []
    for a, b in zip(projected, projected[1:]):
        if cb.same_coset(a, b):
            out.append(LedgerEntry(cb.coset_of(a), a, b, cb.travel(a, b)))
    return tuple(out)


def project_path(cb: ConedBall, steps: Sequence) -> RelativePath:
    """Image of a Cayley-graph path in the coned-off graph with loops removed.

    Maximal same-coset runs become single coset edges and loops are erased,
    repeatedly, until the vertex sequence is stable.
    """
    steps = [cb.base.vertex(s) for s in steps]
    if not steps:
        raise RelRipsError("empty path")
    for a, b in zip(steps, steps[1:]):
        if not any(w == b for _, w in cb.base.adjacency[a]):
            raise RelRipsError(
                f"{cb.base.label(a)} and {cb.base.label(b)} are not adjacent in the Cayley graph"
            )
    seq = list(steps)
    while True:
        nxt = _loop_erase(_collapse_runs(cb, seq))
        if nxt == seq:
            break
        seq = nxt
    return RelativePath(tuple(seq), _ledger(cb, seq), tuple(steps))


def relative_path_from_projection(cb: ConedBall, projected: Sequence[int]) -> RelativePath:
    """Wrap a loop-free coned-off vertex sequence as a (canonical) relative path."""
    projected = tuple(int(v) for v in projected)
    for a, b in zip(projected, projected[1:]):
        if not cb.adjacent(a, b):
            raise RelRipsError("consecutive vertices are not adjacent in the coned-off graph")
    return RelativePath(projected, _ledger(cb, projected))


def _check_interior(cb: ConedBall, path: RelativePath) -> bool:
    ok = cb.is_interior((path.start, path.end), path.relative_length)
    if not ok:
        warnings.warn(
            "path endpoints are too close to the ball boundary; relative distances "
            "may be overestimated",
            TruncationWarning,
            stacklevel=3,
        )
    return ok


def is_relative_geodesic(cb: ConedBall, path: RelativePath) -> bool:
    _check_interior(cb, path)
    return path.relative_length == int(cb.distances[path.start, path.end])


def is_T_relative_quasigeodesic(cb: ConedBall, path: RelativePath, T) -> bool:
    """Two-sided T-quasi-geodesic inequality at all integer parameter pairs."""
    T = Fraction(T)
    if T < 1:
        raise ValueError("T must be at least 1")
    _check_interior(cb, path)
    D = cb.distances
    pts = path.projected
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = int(D[pts[i], pts[j]])
            gap = j - i
            if d < 0 or gap > T * d or d > T * gap:
                return False
    return True


def enumerate_relative_geodesics(
    cb: ConedBall, u, v, d_max: int, cap: int | None = None
) -> list[RelativePath]:
    """All relative geodesics from u to v of relative length <= d_max.

    Paths that agree on their entry and exit vertex in every coset are
    identified, so each result is a coned-off geodesic vertex sequence.
    Ordered lexicographically by vertex index.
    """
    cap = path_cap() if cap is None else cap
    u, v = cb.base.vertex(u), cb.base.vertex(v)
    D = cb.distances
    total = int(D[u, v])
    if total < 0 or total > d_max:
        return []
    if not cb.is_interior((u, v), total):
        warnings.warn("endpoints near the ball boundary", TruncationWarning, stacklevel=2)
    out: list[RelativePath] = []
    prefix = [u]

    def extend(cur: int, depth: int):
        if cur == v:
            if len(out) >= cap:
                raise ResourceLimitError(f"more than {cap} relative geodesics")
            out.append(relative_path_from_projection(cb, prefix))
            return
        for w in cb.neighbors(cur):
            if D[u, w] == depth + 1 and D[w, v] == total - depth - 1:
                prefix.append(w)
                extend(w, depth + 1)
                prefix.pop()

    extend(u, 0)
    return out
