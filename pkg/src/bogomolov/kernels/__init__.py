"""Hot kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and the environment variable
``BOGOMOLOV_DISABLE_NUMBA`` is unset (or ``0``). Both backends share one
contract, so callers go through the dispatch functions below.
"""

import contextlib
import os
from functools import cache

import numpy as np

from . import numpy_impl

try:
    from . import numba_impl
except ImportError:  # numba missing or broken
    numba_impl = None

ENV_FLAG = "BOGOMOLOV_DISABLE_NUMBA"

_BACKENDS = {"numpy": numpy_impl}
if numba_impl is not None:
    _BACKENDS["numba"] = numba_impl


def _default():
    off = os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}
    return numpy_impl if off or numba_impl is None else numba_impl


_active = _default()


def available():
    return sorted(_BACKENDS)


def backend_name():
    return _active.NAME


def set_backend(name):
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}")
    _active = _BACKENDS[name]


@contextlib.contextmanager
def use_backend(name):
    prev = _active
    set_backend(name)
    try:
        yield
    finally:
        globals()["_active"] = prev


@cache
def inverse_table(p):
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def rref_batch(A, p):
    """Reduce a stack ``(m, k, n)`` of matrices mod ``p``; return ``(R, ranks)``."""
    return _active.rref_batch(_i64(A) % p, p, inverse_table(p))


def point_closure(Q, points, p):
    """Span of the common zeros of quadric systems among projective points.

    ``Q`` has shape ``(m, nq, r, r)``; ``points`` lists normalized projective
    points of ``F_p^r``. Returns ``(dims, span)`` with ``span[t, :dims[t]]`` a
    reduced echelon basis of the span, in coefficient coordinates.
    """
    return _active.point_closure(_i64(Q), _i64(points), p, inverse_table(p))


def pencil_closure(ann, pair_i, pair_j, d, vpoints, p):
    """Span of the decomposable vectors inside ``ker(ann)``, scanning ``v`` in P(V).

    ``ann`` has shape ``(m, c, N)``: rows of each slice are linear functionals on
    Lambda^2 F_p^d cutting out the subspace. Returns ``(dims, span)`` with span
    rows in Lambda^2 coordinates.
    """
    return _active.pencil_closure(
        _i64(ann), _i64(pair_i), _i64(pair_j), int(d), _i64(vpoints), p, inverse_table(p)
    )


def rank_rref(R, p, table):
    return _active.rank_rref(_i64(R), p, table.mask_to_pat, table.offsets, table.freepos, table.nfree)


def unrank_batch(idx, p, table):
    return _active.unrank_batch(
        _i64(idx), table.k, table.n, p, table.patterns, table.offsets, table.freepos, table.nfree
    )


def orbit_bfs(seeds, gens, p, table):
    return _active.orbit_bfs(
        _i64(seeds),
        _i64(gens),
        table.k,
        table.n,
        p,
        inverse_table(p),
        table.patterns,
        table.offsets,
        table.freepos,
        table.nfree,
        table.mask_to_pat,
        int(table.total),
    )
