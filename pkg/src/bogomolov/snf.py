"""Smith normal form of small integer matrices (exact, arbitrary precision)."""

from __future__ import annotations


def smith_normal_form(M) -> list[int]:
    """Elementary divisors ``d1 | d2 | ...`` of an integer matrix.

    Returns ``min(rows, cols)`` nonnegative integers; trailing zeros mark the
    rank deficiency.

    >>> smith_normal_form([[1, 0], [1, 5]])
    [1, 5]
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                return [abs(A[i][i]) for i in range(t)] + [0] * (min(m, n) - t)
            _, i0, j0 = min(entries)
            A[t], A[i0] = A[i0], A[t]
            for row in A:
                row[t], row[j0] = row[j0], row[t]
            a = A[t][t]
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // a
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // a
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if not done:
                continue
            # divisibility: fold an offending row into row t and repeat
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % a), None
            )
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
    return [abs(A[i][i]) for i in range(min(m, n))]
