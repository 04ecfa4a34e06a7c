"""Slow, independent reference implementations used only by the tests."""

from fractions import Fraction
from itertools import combinations, product
from math import gcd

import numpy as np


def det_int(M):
    """Exact determinant by fraction-valued elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return int(det)


def determinantal_divisors(M):
    """Elementary divisors via gcds of k x k minors."""
    m, n = len(M), len(M[0])
    prev, out = 1, []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det_int([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            out += [0] * (min(m, n) - k + 1)
            break
        out.append(g // prev)
        prev = g
    return out


def rank_mod_p(M, p):
    """Plain Gaussian elimination on Python ints."""
    A = [[int(x) % p for x in row] for row in M]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
    return r


def wedge_naive(u, v, p=None):
    d = len(u)
    out = [u[i] * v[j] - u[j] * v[i] for i, j in combinations(range(d), 2)]
    return np.array([x % p for x in out] if p else out, dtype=object if p is None else np.int64)


def normalize(v, p):
    v = [int(x) % p for x in v]
    lead = next(x for x in v if x)
    inv = pow(lead, p - 2, p)
    return tuple(x * inv % p for x in v)


def decomposable_lines(d, p):
    """All decomposable lines of Lambda^2 F_p^d from every pair of vectors."""
    lines = set()
    vecs = list(product(range(p), repeat=d))
    for u in vecs:
        for v in vecs:
            w = wedge_naive(u, v, p)
            if any(w):
                lines.add(normalize(w, p))
    return lines


def alt_rank(w, d, p):
    A = np.zeros((d, d), dtype=np.int64)
    for idx, (i, j) in enumerate(combinations(range(d), 2)):
        A[i, j] = w[idx]
        A[j, i] = -w[idx]
    return rank_mod_p(A % p, p)


def closure_brute(basis, d, p):
    """Span of decomposable vectors in the row space of ``basis``, over all coefficient vectors."""
    basis = np.asarray(basis, dtype=np.int64)
    r = basis.shape[0]
    found = []
    for c in product(range(p), repeat=r):
        w = np.array(c, dtype=np.int64) @ basis % p
        if w.any() and alt_rank(w, d, p) == 2:
            found.append(w)
    return rank_mod_p(found, p) if found else 0
