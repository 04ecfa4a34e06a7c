"""Vectorized numpy kernels; reference path when numba is disabled.

Batching replaces the per-item loops of the numba kernels: RREF runs column
by column over a whole stack of matrices, and the closure scans evaluate
every candidate at once and rank the survivors together.
"""

import numpy as np

NAME = "numpy"

# caps the element count of temporaries built by the closure scans
_CHUNK_ELEMS = 1 << 22


def rref_batch(A, p, inv):
    R = np.array(A, dtype=np.int64, copy=True) % p
    m, k, n = R.shape
    ranks = np.zeros(m, dtype=np.int64)
    if m == 0 or k == 0:
        return R, ranks
    rows = np.arange(k)
    for col in range(n):
        cand = (R[:, :, col] != 0) & (rows[None, :] >= ranks[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        piv = cand[sel].argmax(axis=1)
        r = ranks[sel]
        top = R[sel, r].copy()
        R[sel, r] = R[sel, piv]
        R[sel, piv] = top
        lead = R[sel, r, col]
        prow = R[sel, r] * inv[lead][:, None] % p
        R[sel, r] = prow
        f = R[sel, :, col].copy()
        f[np.arange(sel.size), r] = 0
        R[sel] = (R[sel] - f[:, :, None] * prow[:, None, :]) % p
        ranks[sel] += 1
    return R, ranks


def _chunks(m, per_item):
    step = max(1, _CHUNK_ELEMS // max(per_item, 1))
    for lo in range(0, m, step):
        yield lo, min(m, lo + step)


def point_closure(Q, points, p, inv):
    m, nq, r, _ = Q.shape
    npts = points.shape[0]
    dims = np.zeros(m, dtype=np.int64)
    span = np.zeros((m, r, r), dtype=np.int64)
    for lo, hi in _chunks(m, npts * (nq + r)):
        q = Q[lo:hi]
        # s[t, i, q, a] = sum_b Q[t, q, a, b] * P[i, b]
        s = np.einsum("tqab,ib->tiqa", q, points) % p
        vals = np.einsum("tiqa,ia->tiq", s, points) % p
        zero = ~(vals != 0).any(axis=2)
        cand = np.where(zero[:, :, None], points[None, :, :], 0)
        R, ranks = rref_batch(cand, p, inv)
        dims[lo:hi] = ranks
        span[lo:hi] = R[:, :r, :]
    return dims, span


def pencil_closure(ann, pair_i, pair_j, d, vpoints, p, inv):
    m, c, N = ann.shape
    target = N - c
    nv = vpoints.shape[0]
    dims = np.zeros(m, dtype=np.int64)
    span = np.zeros((m, max(target, 1), N), dtype=np.int64)
    if target == 0:
        return dims, span
    for lo, hi in _chunks(m, nv * d * (N + c)):
        a = ann[lo:hi]
        t = a.shape[0]
        omega = np.zeros((t, c, d, d), dtype=np.int64)
        omega[:, :, pair_i, pair_j] = a
        omega[:, :, pair_j, pair_i] = (-a) % p
        # M[t, v, s, j] = f_s(v ^ e_j)
        M = np.einsum("tsaj,va->tvsj", omega, vpoints) % p
        R, _ = rref_batch(M.reshape(t * nv, c, d), p, inv)
        nz = R != 0
        has = nz.any(axis=2)
        pivcol = np.where(has, nz.argmax(axis=2), -1)
        ispiv = np.zeros((t * nv, d), dtype=bool)
        for i in range(c):
            ok = pivcol[:, i] >= 0
            ispiv[ok, pivcol[ok, i]] = True
        K = np.zeros((t * nv, d, d), dtype=np.int64)
        free = ~ispiv
        K[:, np.arange(d), np.arange(d)] = free
        for i in range(c):
            ok = np.nonzero(pivcol[:, i] >= 0)[0]
            K[ok, :, pivcol[ok, i]] = (-R[ok, i, :]) % p * free[ok]
        V = np.tile(vpoints, (t, 1))
        X = (V[:, None, pair_i] * K[:, :, pair_j] - V[:, None, pair_j] * K[:, :, pair_i]) % p
        R2, r2 = rref_batch(X.reshape(t, nv * d, N), p, inv)
        dims[lo:hi] = r2
        span[lo:hi] = R2[:, : span.shape[1], :]
    return dims, span


def rank_rref(R, p, mask_to_pat, offsets, freepos, nfree):
    m, k, n = R.shape
    out = np.zeros(m, dtype=np.int64)
    if m == 0:
        return out
    nz = R != 0
    lead = nz.argmax(axis=2)
    mask = (np.int64(1) << lead.astype(np.int64)).sum(axis=1) if k else np.zeros(m, np.int64)
    pat = mask_to_pat[mask]
    flat = R.reshape(m, k * n)
    for pt in np.unique(pat):
        rows = np.nonzero(pat == pt)[0]
        nf = nfree[pt]
        idx = np.zeros(rows.size, dtype=np.int64)
        for s in range(nf):
            idx = idx * p + flat[rows, freepos[pt, s]]
        out[rows] = offsets[pt] + idx
    return out


def unrank_batch(idx, k, n, p, patterns, offsets, freepos, nfree):
    idx = np.asarray(idx, dtype=np.int64)
    m = idx.size
    out = np.zeros((m, k * n), dtype=np.int64)
    pat = np.searchsorted(offsets, idx, side="right") - 1
    for pt in np.unique(pat):
        rows = np.nonzero(pat == pt)[0]
        local = idx[rows] - offsets[pt]
        for s in range(nfree[pt] - 1, -1, -1):
            out[rows, freepos[pt, s]] = local % p
            local = local // p
        for i in range(k):
            out[rows, i * n + patterns[pt, i]] = 1
    return out.reshape(m, k, n)


def orbit_bfs(seeds, gens, k, n, p, inv, patterns, offsets, freepos, nfree, mask_to_pat, total):
    visited = np.zeros(total, dtype=bool)
    frontier = np.unique(np.asarray(seeds, dtype=np.int64))
    visited[frontier] = True
    found = [frontier]
    step = max(1, _CHUNK_ELEMS // max(k * n * n, 1))
    while frontier.size:
        new = []
        for lo in range(0, frontier.size, step):
            B = unrank_batch(frontier[lo : lo + step], k, n, p, patterns, offsets, freepos, nfree)
            for g in gens:
                C = np.einsum("mia,ja->mij", B, g) % p
                C, _ = rref_batch(C, p, inv)
                idx = np.unique(rank_rref(C, p, mask_to_pat, offsets, freepos, nfree))
                idx = idx[~visited[idx]]
                visited[idx] = True
                new.append(idx)
        frontier = np.concatenate(new) if new else np.zeros(0, np.int64)
        found.append(frontier)
    return np.sort(np.concatenate(found))
