"""numba implementations of the hot loops.

Every function here has a numpy counterpart in ``_numpy.py`` with the same
signature and results; :mod:`relrips.kernels` picks one at import time.
"""

import numpy as np
from numba import njit

INF = np.int16(32767)


@njit(cache=True)
def all_pairs_bfs(indptr, indices):
    n = indptr.shape[0] - 1
    D = np.full((n, n), -1, np.int16)
    queue = np.empty(n, np.int64)
    for s in range(n):
        row = D[s]
        row[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = row[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                w = indices[p]
                if row[w] < 0:
                    row[w] = du
                    queue[tail] = w
                    tail += 1
    return D


@njit(cache=True)
def coned_tables(nk_indptr, nk_indices, coset_of, coset_ptr, coset_members,
                 pos_in_coset, dk_offset, dk_flat):
    n = nk_indptr.shape[0] - 1
    ncos = coset_ptr.shape[0] - 1
    D = np.full((n, n), -1, np.int16)
    RN = np.full((n, n), INF, np.int16)
    best = np.empty(n, np.int16)
    order = np.empty(n, np.int64)
    expanded = np.zeros(ncos, np.bool_)
    for x in range(n):
        dist = D[x]
        dist[x] = 0
        order[0] = x
        head = 0
        tail = 1
        expanded[:] = False
        while head < tail:
            u = order[head]
            head += 1
            du = dist[u] + 1
            for p in range(nk_indptr[u], nk_indptr[u + 1]):
                w = nk_indices[p]
                if dist[w] < 0:
                    dist[w] = du
                    order[tail] = w
                    tail += 1
            c = coset_of[u]
            if not expanded[c]:
                expanded[c] = True
                for q in range(coset_ptr[c], coset_ptr[c + 1]):
                    w = coset_members[q]
                    if dist[w] < 0:
                        dist[w] = du
                        order[tail] = w
                        tail += 1

        # bottleneck DP along the geodesic layers from x
        fin = RN[x]
        best[:] = INF
        best[x] = 0
        fin[x] = 0
        for t in range(tail):
            u = order[t]
            bu = best[u]
            nxt = dist[u] + 1
            for p in range(nk_indptr[u], nk_indptr[u + 1]):
                w = nk_indices[p]
                if dist[w] == nxt:
                    if bu < best[w]:
                        best[w] = bu
                    if bu < fin[w]:
                        fin[w] = bu
            c = coset_of[u]
            lo = coset_ptr[c]
            m = coset_ptr[c + 1] - lo
            base = dk_offset[c] + pos_in_coset[u] * m
            for q in range(lo, lo + m):
                w = coset_members[q]
                if dist[w] == nxt:
                    travel = dk_flat[base + q - lo]
                    last = travel // 3 + 1
                    mid = last if u == x else travel // 2 + 1
                    vb = bu if bu > mid else mid
                    vf = bu if bu > last else last
                    if vb < best[w]:
                        best[w] = vb
                    if vf < fin[w]:
                        fin[w] = vf
    return D, RN


@njit(cache=True)
def _defect(s1, s2, s3):
    if s1 >= s2:
        hi = s1
        lo = s2
    else:
        hi = s2
        lo = s1
    if s3 >= hi:
        return s3 - hi
    if s3 >= lo:
        return hi - s3
    return hi - lo


@njit(cache=True)
def four_point_max(D, idx):
    m = idx.shape[0]
    best = 0
    for a in range(m):
        i = idx[a]
        for b in range(a + 1, m):
            j = idx[b]
            dij = np.int64(D[i, j])
            for c in range(b + 1, m):
                k = idx[c]
                dik = np.int64(D[i, k])
                djk = np.int64(D[j, k])
                for e in range(c + 1, m):
                    l = idx[e]
                    v = _defect(dij + D[k, l], dik + D[j, l], np.int64(D[i, l]) + djk)
                    if v > best:
                        best = v
    return best


@njit(cache=True)
def four_point_quads(D, quads):
    best = 0
    for q in range(quads.shape[0]):
        i = quads[q, 0]
        j = quads[q, 1]
        k = quads[q, 2]
        l = quads[q, 3]
        v = _defect(np.int64(D[i, j]) + D[k, l], np.int64(D[i, k]) + D[j, l],
                    np.int64(D[i, l]) + D[j, k])
        if v > best:
            best = v
    return best
