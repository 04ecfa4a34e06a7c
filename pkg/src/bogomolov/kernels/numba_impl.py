"""Numba kernels. Same contracts as :mod:`bogomolov.kernels.numpy_impl`.

All arrays are int64 with entries reduced to ``[0, p)``; ``inv`` is the
table of inverses modulo ``p`` (``inv[0]`` unused).
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def _rref_inplace(A, p, inv):
    k, n = A.shape
    rank = 0
    for col in range(n):
        if rank == k:
            break
        piv = -1
        for i in range(rank, k):
            if A[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(col, n):
                tmp = A[rank, j]
                A[rank, j] = A[piv, j]
                A[piv, j] = tmp
        s = inv[A[rank, col]]
        for j in range(col, n):
            A[rank, j] = A[rank, j] * s % p
        for i in range(k):
            if i != rank:
                f = A[i, col]
                if f != 0:
                    for j in range(col, n):
                        A[i, j] = (A[i, j] - f * A[rank, j]) % p
        rank += 1
    return rank


@njit(cache=True)
def rref_batch(A, p, inv):
    m = A.shape[0]
    R = A.copy()
    ranks = np.zeros(m, dtype=np.int64)
    for t in range(m):
        ranks[t] = _rref_inplace(R[t], p, inv)
    return R, ranks


@njit(cache=True)
def _insert(span, pivots, dim, x, p, inv):
    """Add ``x`` to the reduced echelon rows ``span[:dim]``; return new dim."""
    w = x.shape[0]
    for i in range(dim):
        f = x[pivots[i]]
        if f != 0:
            for j in range(w):
                x[j] = (x[j] - f * span[i, j]) % p
    lead = -1
    for j in range(w):
        if x[j] != 0:
            lead = j
            break
    if lead < 0:
        return dim
    s = inv[x[lead]]
    for j in range(w):
        x[j] = x[j] * s % p
    for i in range(dim):
        f = span[i, lead]
        if f != 0:
            for j in range(w):
                span[i, j] = (span[i, j] - f * x[j]) % p
    for j in range(w):
        span[dim, j] = x[j]
    pivots[dim] = lead
    return dim + 1


@njit(cache=True)
def _sort_rows(span, pivots, dim):
    # insertion sort by pivot so the rows read as a reduced echelon form
    w = span.shape[1]
    for i in range(1, dim):
        j = i
        while j > 0 and pivots[j - 1] > pivots[j]:
            pivots[j - 1], pivots[j] = pivots[j], pivots[j - 1]
            for c in range(w):
                span[j - 1, c], span[j, c] = span[j, c], span[j - 1, c]
            j -= 1


@njit(cache=True)
def point_closure(Q, points, p, inv):
    m, nq, r, _ = Q.shape
    npts = points.shape[0]
    dims = np.zeros(m, dtype=np.int64)
    span = np.zeros((m, r, r), dtype=np.int64)
    pivots = np.zeros(r, dtype=np.int64)
    x = np.zeros(r, dtype=np.int64)
    for t in range(m):
        dim = 0
        for ip in range(npts):
            ok = True
            for q in range(nq):
                acc = 0
                for a in range(r):
                    pa = points[ip, a]
                    if pa == 0:
                        continue
                    s = 0
                    for b in range(r):
                        s += Q[t, q, a, b] * points[ip, b]
                    acc += pa * (s % p)
                if acc % p != 0:
                    ok = False
                    break
            if not ok:
                continue
            for a in range(r):
                x[a] = points[ip, a]
            dim = _insert(span[t], pivots, dim, x, p, inv)
            if dim == r:
                break
        _sort_rows(span[t], pivots, dim)
        dims[t] = dim
    return dims, span


@njit(cache=True)
def pencil_closure(ann, pair_i, pair_j, d, vpoints, p, inv):
    m, c, N = ann.shape
    target = N - c
    nv = vpoints.shape[0]
    dims = np.zeros(m, dtype=np.int64)
    span = np.zeros((m, max(target, 1), N), dtype=np.int64)
    pivots = np.zeros(N, dtype=np.int64)
    omega = np.zeros((c, d, d), dtype=np.int64)
    M = np.zeros((c, d), dtype=np.int64)
    kvec = np.zeros(d, dtype=np.int64)
    x = np.zeros(N, dtype=np.int64)
    pivcol = np.zeros(c, dtype=np.int64)
    ispiv = np.zeros(d, dtype=np.bool_)
    for t in range(m):
        if target == 0:
            dims[t] = 0
            continue
        for s in range(c):
            for q in range(N):
                a = ann[t, s, q]
                omega[s, pair_i[q], pair_j[q]] = a
                omega[s, pair_j[q], pair_i[q]] = (p - a) % p
        dim = 0
        for iv in range(nv):
            # M[s, j] = f_s(v ^ e_j)
            for s in range(c):
                for j in range(d):
                    acc = 0
                    for a in range(d):
                        acc += omega[s, a, j] * vpoints[iv, a]
                    M[s, j] = acc % p
            rk = _rref_inplace(M, p, inv)
            for j in range(d):
                ispiv[j] = False
            for i in range(rk):
                for j in range(d):
                    if M[i, j] != 0:
                        pivcol[i] = j
                        ispiv[j] = True
                        break
            for f in range(d):
                if ispiv[f]:
                    continue
                for j in range(d):
                    kvec[j] = 0
                kvec[f] = 1
                for i in range(rk):
                    kvec[pivcol[i]] = (p - M[i, f]) % p
                for q in range(N):
                    a = pair_i[q]
                    b = pair_j[q]
                    x[q] = (vpoints[iv, a] * kvec[b] - vpoints[iv, b] * kvec[a]) % p
                dim = _insert(span[t], pivots, dim, x, p, inv)
                if dim == target:
                    break
            if dim == target:
                break
        _sort_rows(span[t], pivots, dim)
        dims[t] = dim
    return dims, span


@njit(cache=True)
def rank_rref(R, p, mask_to_pat, offsets, freepos, nfree):
    m, k, n = R.shape
    out = np.zeros(m, dtype=np.int64)
    for t in range(m):
        mask = 0
        for i in range(k):
            for j in range(n):
                if R[t, i, j] != 0:
                    mask |= 1 << j
                    break
        pat = mask_to_pat[mask]
        idx = 0
        for s in range(nfree[pat]):
            pos = freepos[pat, s]
            idx = idx * p + R[t, pos // n, pos % n]
        out[t] = offsets[pat] + idx
    return out


@njit(cache=True)
def _unrank_into(idx, out, p, patterns, offsets, freepos, nfree):
    k, n = out.shape
    lo = 0
    hi = patterns.shape[0] - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if offsets[mid] <= idx:
            lo = mid
        else:
            hi = mid - 1
    pat = lo
    local = idx - offsets[pat]
    for i in range(k):
        for j in range(n):
            out[i, j] = 0
    for i in range(k):
        out[i, patterns[pat, i]] = 1
    for s in range(nfree[pat] - 1, -1, -1):
        pos = freepos[pat, s]
        out[pos // n, pos % n] = local % p
        local //= p


@njit(cache=True)
def unrank_batch(idx, k, n, p, patterns, offsets, freepos, nfree):
    m = idx.shape[0]
    out = np.zeros((m, k, n), dtype=np.int64)
    for t in range(m):
        _unrank_into(idx[t], out[t], p, patterns, offsets, freepos, nfree)
    return out


@njit(cache=True)
def orbit_bfs(seeds, gens, k, n, p, inv, patterns, offsets, freepos, nfree, mask_to_pat, total):
    visited = np.zeros(total, dtype=np.uint8)
    queue = np.zeros(total, dtype=np.int64)
    tail = 0
    for s in seeds:
        if visited[s] == 0:
            visited[s] = 1
            queue[tail] = s
            tail += 1
    B = np.zeros((k, n), dtype=np.int64)
    C = np.zeros((1, k, n), dtype=np.int64)
    head = 0
    while head < tail:
        _unrank_into(queue[head], B, p, patterns, offsets, freepos, nfree)
        head += 1
        for g in range(gens.shape[0]):
            for i in range(k):
                for j in range(n):
                    acc = 0
                    for a in range(n):
                        acc += B[i, a] * gens[g, j, a]
                    C[0, i, j] = acc % p
            _rref_inplace(C[0], p, inv)
            nxt = rank_rref(C, p, mask_to_pat, offsets, freepos, nfree)[0]
            if visited[nxt] == 0:
                visited[nxt] = 1
                queue[tail] = nxt
                tail += 1
    return np.sort(queue[:tail])
