"""Exact linear algebra over prime fields F_p and over the rationals.

Matrices are numpy arrays: ``int64`` with entries in ``[0, p)`` over F_p and
``object`` arrays of :class:`fractions.Fraction` over Q. Subspaces are stored
by their reduced row echelon basis, so equal subspaces compare equal
entry-wise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import ParameterError

MAX_PRIME = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """Either F_p (``p`` an odd prime below 2**16) or Q (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            p = self.p
            if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
                raise ParameterError(f"p={p!r} is not a prime")
            if p == 2:
                raise ParameterError("characteristic 2 is not supported")
            if p >= MAX_PRIME:
                raise ParameterError(f"p={p} exceeds the single-word bound {MAX_PRIME}")
            object.__setattr__(self, "p", int(p))

    @classmethod
    def prime(cls, p: int) -> Field:
        return cls(p)

    @classmethod
    def rational(cls) -> Field:
        return cls(None)

    @property
    def kind(self) -> str:
        return "rational" if self.p is None else "prime"

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def array(self, data) -> np.ndarray:
        """Coerce ``data`` to this field's matrix representation."""
        if self.p is not None:
            a = np.asarray(data)
            if a.dtype == object:
                a = np.vectorize(lambda x: _mod_fraction(x, self.p), otypes=[np.int64])(a)
            return np.asarray(a, dtype=np.int64) % self.p
        a = np.asarray(data, dtype=object)
        out = np.empty(a.shape, dtype=object)
        flat, src = out.reshape(-1), a.reshape(-1)
        for i, x in enumerate(src):
            flat[i] = Fraction(x)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.p is not None:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = 1 if self.p is not None else Fraction(1)
        return a

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a % self.p if self.p is not None else a

    def matmul(self, a, b) -> np.ndarray:
        if self.p is not None:
            return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % self.p
        return np.dot(np.asarray(a, dtype=object), np.asarray(b, dtype=object))

    def inv(self, a):
        if self.p is not None:
            a = int(a) % self.p
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return pow(a, self.p - 2, self.p)
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return not np.any(np.asarray(a) != 0)


def _mod_fraction(x, p):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, p - 2, p) % p


def _rref_rational(M: np.ndarray):
    k, n = M.shape
    R = [[Fraction(x) for x in row] for row in M]
    rank = 0
    for col in range(n):
        if rank == k:
            break
        piv = next((i for i in range(rank, k) if R[i][col] != 0), None)
        if piv is None:
            continue
        R[rank], R[piv] = R[piv], R[rank]
        lead = R[rank][col]
        R[rank] = [x / lead for x in R[rank]]
        for i in range(k):
            f = R[i][col]
            if i != rank and f != 0:
                R[i] = [a - f * b for a, b in zip(R[i], R[rank])]
        rank += 1
    out = np.empty((k, n), dtype=object)
    for i in range(k):
        for j in range(n):
            out[i, j] = R[i][j]
    return out, rank


def rref(M, field: Field):
    """Reduced row echelon form of ``M``; returns ``(R, rank)``.

    ``R`` has the shape of ``M`` with the ``rank`` nonzero rows on top.
    """
    A = field.array(M)
    if A.ndim != 2:
        raise ParameterError("rref expects a 2-d matrix")
    if A.size == 0:
        return A.copy(), 0
    if field.p is None:
        return _rref_rational(A)
    R, ranks = kernels.rref_batch(A[None], field.p)
    return R[0], int(ranks[0])


def rank(M, field: Field) -> int:
    return rref(M, field)[1]


def pivot_columns(R: np.ndarray, rank: int) -> list[int]:
    cols = []
    for i in range(rank):
        row = R[i]
        cols.append(next(j for j in range(row.shape[0]) if row[j] != 0))
    return cols


def matrix_inverse(M, field: Field) -> np.ndarray:
    A = field.array(M)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ParameterError("matrix_inverse expects a square matrix")
    R, r = rref(np.hstack([A, field.eye(n)]), field)
    if r < n or any(R[i, i] != 1 for i in range(n)) or not field.is_zero(R[:, :n] - field.eye(n)):
        raise ParameterError("matrix is singular")
    return R[:, n:]


class Subspace:
    """A subspace of ``field^ambient`` held by its RREF basis (``dim x ambient``)."""

    __slots__ = ("_key", "ambient", "basis", "field", "pivots")

    def __init__(self, field: Field, ambient: int, basis: np.ndarray, pivots: list[int]):
        self.field = field
        self.ambient = int(ambient)
        self.basis = basis
        self.pivots = tuple(pivots)
        if field.p is not None:
            basis.setflags(write=False)
            self._key = (field, self.ambient, basis.shape, basis.tobytes())
        else:
            self._key = (field, self.ambient, basis.shape, tuple(basis.reshape(-1)))

    @classmethod
    def from_rows(cls, rows, field: Field, ambient: int | None = None) -> Subspace:
        A = field.array(rows)
        if A.ndim == 1:
            A = A.reshape(1, -1) if A.size else A.reshape(0, ambient or 0)
        if ambient is None:
            ambient = A.shape[1]
        if A.shape[0] == 0:
            return cls.zero(field, ambient)
        if A.shape[1] != ambient:
            raise ParameterError(f"rows have length {A.shape[1]}, ambient is {ambient}")
        R, r = rref(A, field)
        return cls(field, ambient, R[:r].copy(), pivot_columns(R, r))

    @classmethod
    def from_rref(cls, R, field: Field) -> Subspace:
        """Wrap an array already known to be a full-rank RREF basis."""
        R = field.array(R)
        return cls(field, R.shape[1], R, pivot_columns(R, R.shape[0]))

    @classmethod
    def zero(cls, field: Field, ambient: int) -> Subspace:
        return cls(field, ambient, field.zeros((0, ambient)), [])

    @classmethod
    def full(cls, field: Field, ambient: int) -> Subspace:
        return cls(field, ambient, field.eye(ambient), list(range(ambient)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    @property
    def free_columns(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ambient) if j not in piv]

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace({self.field!r}, dim={self.dim}, ambient={self.ambient})"

    def reduce(self, v) -> np.ndarray:
        """Normal form of ``v`` modulo this subspace (zero on the pivot columns)."""
        v = self.field.array(v).copy()
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f != 0:
                v = v - f * row
        return self.field.reduce(v)

    def quotient_coords(self, v) -> np.ndarray:
        """Coordinates of ``v`` in ``ambient / self`` w.r.t. the free-column section."""
        return self.reduce(v)[self.free_columns]

    def contains(self, v) -> bool:
        return self.field.is_zero(self.reduce(v))

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` (which must lie in the subspace) on the RREF basis."""
        v = self.field.array(v)
        if not self.contains(v):
            raise ParameterError("vector is not in the subspace")
        return v[list(self.pivots)]

    def annihilator(self) -> np.ndarray:
        """Rows spanning the functionals vanishing on the subspace (``codim x ambient``)."""
        free = self.free_columns
        A = self.field.zeros((len(free), self.ambient))
        for s, j in enumerate(free):
            A[s, j] = 1
            for row, c in zip(self.basis, self.pivots):
                A[s, c] = -row[j]
        return self.field.reduce(A)

    def apply(self, g) -> Subspace:
        """Image under the linear map with matrix ``g`` acting on column vectors."""
        g = self.field.array(g)
        if self.dim == 0:
            return self
        return Subspace.from_rows(self.field.matmul(self.basis, g.T), self.field, self.ambient)

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(row) for row in self.basis)


def _check_same(A: Subspace, B: Subspace):
    if A.ambient != B.ambient or A.field != B.field:
        raise ParameterError("subspaces live in different ambient spaces")


def kernel_basis(M, field: Field) -> Subspace:
    """Right kernel ``{x : M x = 0}`` as a subspace of ``field^cols``."""
    A = field.array(M)
    n = A.shape[1]
    if A.shape[0] == 0:
        return Subspace.full(field, n)
    R, r = rref(A, field)
    piv = pivot_columns(R, r)
    pivset = set(piv)
    rows = []
    for f in range(n):
        if f in pivset:
            continue
        x = field.zeros(n)
        x[f] = 1
        for i, c in enumerate(piv):
            x[c] = -R[i, f]
        rows.append(field.reduce(x))
    if not rows:
        return Subspace.zero(field, n)
    return Subspace.from_rows(np.array(rows, dtype=A.dtype), field, n)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _check_same(A, B)
    return Subspace.from_rows(np.vstack([A.basis, B.basis]), A.field, A.ambient)


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    _check_same(A, B)
    return kernel_basis(np.vstack([A.annihilator(), B.annihilator()]), A.field)


def subspace_contains(A: Subspace, v) -> bool:
    v = A.field.array(v)
    if v.shape != (A.ambient,):
        raise ParameterError("vector length does not match the ambient dimension")
    return A.contains(v)
