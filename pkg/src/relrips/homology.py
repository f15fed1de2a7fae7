"""Reduced simplicial homology with integer coefficients.

Chains are sparse ``{simplex index: coefficient}`` dicts with Python ints,
so no entry can overflow.  Two exact engines are provided:

* :func:`smith_normal_form`, a dense Smith form with unimodular transforms
  for small matrices;
* :class:`ZEchelon`, a sparse column echelon form over Z built with
  unimodular column operations.  It yields kernel bases, decides lattice
  membership exactly and returns the combination that solves ``A x = b``.

Torsion is read from the invariant factors of the next boundary map,
computed by sparse elimination of unit pivots followed by a dense Smith form
on whatever is left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import SimplicialComplex
from .errors import RelRipsError

Chain = dict[int, int]


# ---------------------------------------------------------------------------
# dense Smith normal form


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(inner)) for j in range(cols)]
            for i in range(len(A))]


@dataclass(frozen=True)
class SNFResult:
    diagonal: tuple[int, ...]
    U: list[list[int]]
    V: list[list[int]]
    D: list[list[int]]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def verify(self, A: Sequence[Sequence[int]]) -> bool:
        """U A V == D, D diagonal with the stored entries, divisibility chain."""
        A = [list(map(int, row)) for row in A]
        if matmul(matmul(self.U, A), self.V) != self.D:
            return False
        m, n = len(self.D), (len(self.D[0]) if self.D else 0)
        for i in range(m):
            for j in range(n):
                want = self.diagonal[i] if i == j and i < len(self.diagonal) else 0
                if self.D[i][j] != want:
                    return False
        r = self.rank
        if any(d < 0 for d in self.diagonal) or not all(self.diagonal[:r]):
            return False
        # every d_i divides d_{i+1}; zeros trail and are divisible by anything
        return all(b % a == 0 for a, b in zip(self.diagonal[:r], self.diagonal[1:r]))


def smith_normal_form(A: Sequence[Sequence[int]]) -> SNFResult:
    """Smith normal form ``U A V = D`` with unimodular U, V.

    The pivot is always a nonzero entry of least absolute value in the
    remaining block, which keeps the entries small.
    """
    M = [list(map(int, row)) for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        if q:
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        if q:
            for row in M:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                if row[j] and (best is None or abs(row[j]) < best[0]):
                    best = (abs(row[j]), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    dirty |= M[i][t] != 0
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    dirty |= M[t][j] != 0
            if dirty:
                # a smaller remainder appeared in the pivot row or column
                cand = [(abs(M[i][t]), i, t) for i in range(t + 1, m) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t + 1, n) if M[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if M[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diagonal = tuple(M[i][i] for i in range(min(m, n)))
    return SNFResult(diagonal, U, V, M)


# ---------------------------------------------------------------------------
# sparse integer column echelon


def _axpy(y: Chain, a: int, x: Chain) -> None:
    """y += a * x, in place, dropping zeros."""
    if not a:
        return
    for key, val in x.items():
        new = y.get(key, 0) + a * val
        if new:
            y[key] = new
        else:
            y.pop(key, None)


def _combine(a: int, x: Chain, b: int, y: Chain) -> Chain:
    out: Chain = {}
    _axpy(out, a, x)
    _axpy(out, b, y)
    return out


class ZEchelon:
    """Column echelon form of a lattice of integer vectors.

    Stored columns have pairwise distinct lowest rows (``low`` = largest row
    index with a nonzero entry).  Each stored column remembers its origin as
    an integer combination of the inserted generators, so every membership
    answer comes with an explicit solution.
    """

    def __init__(self, track: bool = True):
        self.columns: dict[int, Chain] = {}
        self.origins: dict[int, Chain] = {}
        self.track = track

    def __len__(self) -> int:
        return len(self.columns)

    def copy(self, track: bool | None = None) -> "ZEchelon":
        other = ZEchelon(self.track if track is None else track)
        other.columns = {k: dict(v) for k, v in self.columns.items()}
        if other.track:
            other.origins = {k: dict(v) for k, v in self.origins.items()}
        return other

    def pivots(self) -> dict[int, int]:
        return {low: col[low] for low, col in self.columns.items()}

    def add(self, vector: Chain, origin: Chain | None = None) -> Chain | None:
        """Insert a generator.  Returns its relation (an origin combination
        summing to zero) when it is dependent over Q, else ``None``."""
        col = {k: v for k, v in vector.items() if v}
        org = dict(origin) if (self.track and origin is not None) else {}
        while col:
            low = max(col)
            stored = self.columns.get(low)
            if stored is None:
                self.columns[low] = col
                if self.track:
                    self.origins[low] = org
                return None
            a, b = col[low], stored[low]
            if a % b == 0:
                q = a // b
                _axpy(col, -q, stored)
                if self.track:
                    _axpy(org, -q, self.origins[low])
                continue
            g, x, y = _xgcd(b, a)
            # [stored, col] -> [x*stored + y*col, (a/g)*stored - (b/g)*col], det -1
            new_stored = _combine(x, stored, y, col)
            new_col = _combine(a // g, stored, -(b // g), col)
            if self.track:
                so = self.origins[low]
                self.origins[low] = _combine(x, so, y, org)
                org = _combine(a // g, so, -(b // g), org)
            self.columns[low] = new_stored
            col = new_col
        return org

    def solve(self, vector: Chain) -> Chain | None:
        """Integer combination of generators equal to ``vector``, or None."""
        col = {k: v for k, v in vector.items() if v}
        sol: Chain = {}
        while col:
            low = max(col)
            stored = self.columns.get(low)
            if stored is None or col[low] % stored[low]:
                return None
            q = col[low] // stored[low]
            _axpy(col, -q, stored)
            if self.track:
                _axpy(sol, q, self.origins[low])
        return sol

    def contains(self, vector: Chain) -> bool:
        col = {k: v for k, v in vector.items() if v}
        while col:
            low = max(col)
            stored = self.columns.get(low)
            if stored is None or col[low] % stored[low]:
                return False
            _axpy(col, -(col[low] // stored[low]), stored)
        return True


def invariant_factors(columns: Iterable[Chain]) -> list[int]:
    """Nonzero invariant factors of the matrix with the given sparse columns."""
    cols = {j: dict(c) for j, c in enumerate(columns) if c}
    rows: dict[int, set[int]] = {}
    for j, c in cols.items():
        for i in c:
            rows.setdefault(i, set()).add(j)
    factors: list[int] = []
    while True:
        pivot = None
        best = None
        for j, c in cols.items():
            for i, v in c.items():
                if v in (1, -1):
                    cost = (len(c) - 1) * (len(rows[i]) - 1)
                    if best is None or cost < best:
                        best, pivot = cost, (i, j)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pivot is None:
            break
        i, j = pivot
        pc = cols.pop(j)
        pv = pc[i]
        for r in pc:
            rows[r].discard(j)
        for other in sorted(rows.pop(i)):
            c = cols[other]
            q = c[i] * pv  # pv is +-1, so c[i]/pv == c[i]*pv
            for r, val in pc.items():
                new = c.get(r, 0) - q * val
                if new:
                    if r not in c:
                        rows.setdefault(r, set()).add(other)
                    c[r] = new
                else:
                    if r in c:
                        del c[r]
                        if r != i:
                            rows[r].discard(other)
            c.pop(i, None)
            if not c:
                del cols[other]
        factors.append(1)
    if cols:
        row_ids = sorted({i for c in cols.values() for i in c})
        col_ids = sorted(cols)
        pos = {r: t for t, r in enumerate(row_ids)}
        dense = [[0] * len(col_ids) for _ in row_ids]
        for t, j in enumerate(col_ids):
            for i, v in cols[j].items():
                dense[pos[i]][t] = v
        factors.extend(d for d in smith_normal_form(dense).diagonal if d)
    return sorted(factors)


# ---------------------------------------------------------------------------
# chain complexes and homology


def boundary_chain(simplex: tuple[int, ...], index: dict) -> Chain:
    out: Chain = {}
    if len(simplex) == 1:
        return {0: 1}
    for i in range(len(simplex)):
        face = simplex[:i] + simplex[i + 1:]
        out[index[face]] = -1 if i % 2 else 1
    return out


class ChainComplex:
    """Augmented simplicial chain complex of a :class:`SimplicialComplex`.

    ``boundary(k)`` holds the columns of the k-th boundary map; ``boundary(0)``
    is the augmentation sending every vertex to 1, so homology is reduced.
    """

    def __init__(self, X: SimplicialComplex, k_top: int | None = None):
        k_top = X.k_max if k_top is None else k_top
        if k_top > X.k_max:
            raise RelRipsError(f"complex is truncated at dimension {X.k_max} < {k_top}")
        self.X = X
        self.k_top = k_top
        self._boundaries: dict[int, list[Chain]] = {}
        self._kernel: dict[int, tuple[ZEchelon, list[Chain]]] = {}
        self._image: dict[int, ZEchelon] = {}

    def rank(self, k: int) -> int:
        return self.X.count(k) if 0 <= k <= self.k_top else 0

    def boundary(self, k: int) -> list[Chain]:
        if not 0 <= k <= self.k_top:
            raise RelRipsError(f"no chains in dimension {k}")
        cols = self._boundaries.get(k)
        if cols is None:
            index = self.X.index(k - 1) if k else {}
            cols = [boundary_chain(s, index) for s in self.X.simplices[k]]
            self._boundaries[k] = cols
        return cols

    def boundary_matrix(self, k: int) -> list[list[int]]:
        """Dense ``rows = (k-1)-simplices, cols = k-simplices`` matrix."""
        nrows = 1 if k == 0 else self.rank(k - 1)
        cols = self.boundary(k)
        M = [[0] * len(cols) for _ in range(nrows)]
        for j, c in enumerate(cols):
            for i, v in c.items():
                M[i][j] = v
        return M

    def apply_boundary(self, k: int, chain: Chain) -> Chain:
        cols = self.boundary(k)
        out: Chain = {}
        for j, c in chain.items():
            _axpy(out, c, cols[j])
        return out

    def check_dd_zero(self) -> bool:
        for k in range(1, self.k_top + 1):
            for j in range(self.rank(k)):
                if self.apply_boundary(k - 1, self.boundary(k)[j]):
                    return False
        return True

    def kernel(self, k: int) -> list[Chain]:
        """Z-basis of the k-cycles (of the augmented complex), deterministic."""
        if k not in self._kernel:
            ech = ZEchelon()
            basis = []
            for j, col in enumerate(self.boundary(k)):
                rel = ech.add(col, {j: 1})
                if rel is not None:
                    basis.append(rel)
            self._kernel[k] = (ech, basis)
        return self._kernel[k][1]

    def image(self, k: int) -> ZEchelon:
        """Echelon form of the image of the boundary of (k+1)-chains."""
        if k not in self._image:
            ech = ZEchelon()
            if k + 1 <= self.k_top:
                for j, col in enumerate(self.boundary(k + 1)):
                    ech.add(col, {j: 1})
            self._image[k] = ech
        return self._image[k]

    def bounding_chain(self, k: int, cycle: Chain) -> Chain | None:
        """A (k+1)-chain whose boundary is ``cycle``, or None."""
        if k + 1 > self.k_top:
            return None if any(cycle.values()) else {}
        return self.image(k).solve(cycle)


@dataclass
class HomologyGroup:
    dim: int
    betti: int
    torsion: list[int]
    cycle_basis: list[Chain]
    cycles_rank: int = 0
    boundaries_rank: int = 0
    n_simplices: dict = field(default_factory=dict)

    @property
    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "betti": self.betti,
            "torsion": list(self.torsion),
            "n_simplices": {str(k): v for k, v in self.n_simplices.items()},
        }


def boundary_matrices(X: SimplicialComplex, k_top: int) -> ChainComplex:
    cc = ChainComplex(X, k_top)
    if not cc.check_dd_zero():
        raise RelRipsError("boundary of a boundary is nonzero")
    return cc


def reduced_homology(cc: ChainComplex, k: int) -> HomologyGroup:
    """Reduced H_k with Betti number, torsion and generating cycles.

    ``cycle_basis`` generates the group; it is a basis whenever the group is
    torsion-free.
    """
    if k < 0 or k + 1 > cc.k_top:
        raise RelRipsError(
            f"H_{k} needs simplices through dimension {k + 1}; complex has k_top={cc.k_top}"
        )
    Z = cc.kernel(k)
    B = cc.image(k)
    betti = len(Z) - len(B)
    torsion = [d for d in invariant_factors(B.columns.values()) if d > 1]
    gens: list[Chain] = []
    if betti or torsion:
        lattice = B.copy(track=False)
        for z in Z:
            if not lattice.contains(z):
                gens.append(z)
                lattice.add(z)
    counts = {j: cc.rank(j) for j in range(cc.k_top + 1)}
    return HomologyGroup(k, betti, torsion, gens, len(Z), len(B), counts)


def homology(X: SimplicialComplex, k: int) -> HomologyGroup:
    return reduced_homology(ChainComplex(X, k + 1), k)


@dataclass
class ZeroTestResult:
    """Outcome of testing whether an inclusion kills reduced H_k.

    ``evidence`` pairs each generating source cycle (in target indices)
    with a target (k+1)-chain bounding it; ``witness`` is a source cycle
    whose class survives when the map is nonzero.
    """

    k: int
    zero: bool
    witness: Chain | None
    evidence: list[tuple[Chain, Chain]]

    def verify(self, target: ChainComplex) -> bool:
        return all(target.apply_boundary(self.k + 1, c) == z for z, c in self.evidence)


def map_chain(chain: Chain, source: SimplicialComplex, target: SimplicialComplex,
              k: int, vertex_map: Sequence[int]) -> Chain:
    """Push a k-chain forward along an injective vertex map."""
    tidx = target.index(k)
    out: Chain = {}
    simp = source.simplices[k]
    for j, c in chain.items():
        image = tuple(sorted(vertex_map[v] for v in simp[j]))
        t = tidx.get(image)
        if t is None:
            raise RelRipsError(f"simplex {simp[j]} has no image in the target")
        sign = _permutation_sign([vertex_map[v] for v in simp[j]])
        out[t] = out.get(t, 0) + sign * c
    return {t: c for t, c in out.items() if c}


def _permutation_sign(seq: list[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def induced_map_zero_test(inc, k: int, source_cc: ChainComplex | None = None,
                          target_cc: ChainComplex | None = None) -> ZeroTestResult:
    """Decide whether ``inc`` induces the zero map on reduced H_k."""
    src = source_cc or ChainComplex(inc.source, k + 1)
    tgt = target_cc or ChainComplex(inc.target, k + 1)
    H = reduced_homology(src, k)
    evidence = []
    for z in H.cycle_basis:
        if k == 0:
            image = _map_vertices(z, inc)
        else:
            image = map_chain(z, inc.source, inc.target, k, inc.vertex_map)
        c = tgt.bounding_chain(k, image)
        if c is None:
            return ZeroTestResult(k, False, z, evidence)
        evidence.append((image, c))
    return ZeroTestResult(k, True, None, evidence)


def _map_vertices(chain: Chain, inc) -> Chain:
    out: Chain = {}
    for v, c in chain.items():
        t = inc.vertex_map[v]
        out[t] = out.get(t, 0) + c
    return {t: c for t, c in out.items() if c}
