"""Pure-numpy fallbacks for the kernels in ``_numba.py``.

These trade memory for vectorization: BFS runs over blocks of sources at
once and the coned-off graph is handled with its coset cliques spelled out
as explicit edges (the numba kernel jumps through cosets instead).
"""

import numpy as np

INF = np.int16(32767)
_BLOCK = 256


def all_pairs_bfs(indptr, indices):
    n = indptr.shape[0] - 1
    D = np.full((n, n), -1, np.int16)
    if n == 0:
        return D
    if indices.shape[0] == 0:
        np.fill_diagonal(D, 0)
        return D
    deg = np.diff(indptr)
    has_nbr = deg > 0
    starts = indptr[:-1][has_nbr]
    cols = np.flatnonzero(has_nbr)
    for lo in range(0, n, _BLOCK):
        hi = min(n, lo + _BLOCK)
        rows = np.arange(lo, hi)
        frontier = np.zeros((hi - lo, n), bool)
        frontier[rows - lo, rows] = True
        seen = frontier.copy()
        block = D[lo:hi]
        block[rows - lo, rows] = 0
        level = 0
        while frontier.any():
            level += 1
            gathered = frontier[:, indices]
            reached = np.zeros_like(frontier)
            reached[:, cols] = np.logical_or.reduceat(gathered, starts, axis=1)
            frontier = reached & ~seen
            seen |= frontier
            block[frontier] = level
    return D


def _coned_csr(nk_indptr, nk_indices, coset_of, coset_ptr, coset_members,
               pos_in_coset, dk_offset, dk_flat):
    n = nk_indptr.shape[0] - 1
    src = [np.repeat(np.arange(n), np.diff(nk_indptr))]
    dst = [nk_indices.astype(np.int64)]
    travel = [np.full(nk_indices.shape[0], -1, np.int64)]
    for c in range(coset_ptr.shape[0] - 1):
        mem = coset_members[coset_ptr[c]:coset_ptr[c + 1]]
        m = mem.shape[0]
        if m < 2:
            continue
        a, b = np.nonzero(~np.eye(m, dtype=bool))
        src.append(mem[a])
        dst.append(mem[b])
        travel.append(dk_flat[dk_offset[c] + a * m + b].astype(np.int64))
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    travel = np.concatenate(travel)
    order = np.lexsort((dst, src))
    src, dst, travel = src[order], dst[order], travel[order]
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, src + 1, 1)
    return np.cumsum(indptr), dst, src, travel


def coned_tables(nk_indptr, nk_indices, coset_of, coset_ptr, coset_members,
                 pos_in_coset, dk_offset, dk_flat):
    indptr, dst, src, travel = _coned_csr(
        nk_indptr, nk_indices, coset_of, coset_ptr, coset_members,
        pos_in_coset, dk_offset, dk_flat,
    )
    D = all_pairs_bfs(indptr, dst)
    n = D.shape[0]
    RN = np.full((n, n), INF, np.int16)
    np.fill_diagonal(RN, 0)
    if dst.shape[0] == 0:
        return D, RN

    # group directed edges by head so minima can be taken with reduceat
    order = np.argsort(dst, kind="stable")
    src, dst, travel = src[order], dst[order], travel[order]
    heads, starts = np.unique(dst, return_index=True)
    need_last = np.where(travel < 0, 0, travel // 3 + 1).astype(np.int16)
    need_mid = np.where(travel < 0, 0, travel // 2 + 1).astype(np.int16)
    maxd = int(D.max())

    for lo in range(0, n, _BLOCK):
        hi = min(n, lo + _BLOCK)
        Db = D[lo:hi]
        best = np.full((hi - lo, n), INF, np.int16)
        best[np.arange(hi - lo), np.arange(lo, hi)] = 0
        fin = RN[lo:hi]
        for level in range(1, maxd + 1):
            mask = (Db[:, dst] == level) & (Db[:, src] == level - 1)
            if not mask.any():
                continue
            bsrc = best[:, src]
            need_b = need_last if level == 1 else need_mid
            cand_b = np.where(mask, np.maximum(bsrc, need_b), INF)
            cand_f = np.where(mask, np.maximum(bsrc, need_last), INF)
            red_b = np.minimum.reduceat(cand_b, starts, axis=1)
            red_f = np.minimum.reduceat(cand_f, starts, axis=1)
            best[:, heads] = np.minimum(best[:, heads], red_b)
            fin[:, heads] = np.minimum(fin[:, heads], red_f)
    return D, RN


def _defects(s1, s2, s3):
    hi = np.maximum(s1, s2)
    lo = np.minimum(s1, s2)
    return np.where(s3 >= hi, s3 - hi, np.where(s3 >= lo, hi - s3, hi - lo))


def four_point_max(D, idx):
    idx = np.asarray(idx, np.int64)
    m = idx.shape[0]
    if m < 4:
        return 0
    S = D[np.ix_(idx, idx)].astype(np.int64)
    best = 0
    cc, ee = np.triu_indices(m, 1)
    for a in range(m):
        for b in range(a + 1, m - 2):
            keep = cc > b
            c, e = cc[keep], ee[keep]
            v = _defects(S[a, b] + S[c, e], S[a, c] + S[b, e], S[a, e] + S[b, c])
            best = max(best, int(v.max()))
    return best


def four_point_quads(D, quads):
    if quads.shape[0] == 0:
        return 0
    i, j, k, l = (quads[:, t] for t in range(4))
    D = D.astype(np.int64)
    v = _defects(D[i, j] + D[k, l], D[i, k] + D[j, l], D[i, l] + D[j, k])
    return int(v.max())
