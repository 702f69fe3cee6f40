"""Dense linear algebra over a :class:`~mpqlrc.gf.Field`.

Matrices are integer arrays of enumeration indices wrapped in :class:`FMatrix`.
The module-level helpers prefixed with an underscore work on raw arrays and are
what the coding modules call in their inner loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from .errors import NotFullRank, ShapeMismatch, Singular
from .gf import Field, make_field


@dataclass(frozen=True, eq=False)
class FMatrix:
    """A ``rows x cols`` matrix with entries in ``field``."""

    field: Field
    entries: np.ndarray

    def __post_init__(self) -> None:
        e = np.array(self.entries, dtype=np.int64)
        if e.ndim != 2:
            e = e.reshape(len(e), -1) if e.size else e.reshape(0, 0)
        if e.size and (e.min() < 0 or e.max() >= self.field.q):
            raise ShapeMismatch("entries must be enumeration indices in [0, q)")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape  # type: ignore[return-value]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FMatrix)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"FMatrix({self.field!r}, {self.entries.tolist()})"

    def __getitem__(self, key) -> FMatrix:
        sub = self.entries[key]
        return FMatrix(self.field, np.atleast_2d(sub))

    def __matmul__(self, other: FMatrix) -> FMatrix:
        _same_field(self, other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return FMatrix(self.field, matmul(self.field, self.entries, other.entries))

    @property
    def T(self) -> FMatrix:
        return FMatrix(self.field, self.entries.T)

    def conj(self) -> FMatrix:
        return FMatrix(self.field, np.asarray(self.field.conj(self.entries)))

    def rank(self) -> int:
        return rref(self)[1]

    def prefix(self, s: int) -> FMatrix:
        """The submatrix of the first ``s`` rows."""
        return FMatrix(self.field, self.entries[:s])

    def to_dict(self) -> dict[str, Any]:
        return {
            "field": self.field.to_dict(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> FMatrix:
        F = make_field(**d["field"])
        e = np.array(d["entries"], dtype=np.int64).reshape(d["rows"], d["cols"])
        return cls(F, e)


@dataclass(frozen=True)
class MonomialWitness:
    """``M = D P`` with ``D = diag(diagonal)`` and ``P[i, l] = 1`` iff ``permutation[l] == i``.

    Indices are 0-based.
    """

    permutation: tuple[int, ...]
    diagonal: tuple[int, ...]

    def matrix(self, F: Field) -> FMatrix:
        n = len(self.permutation)
        M = np.zeros((n, n), dtype=np.int64)
        for l, i in enumerate(self.permutation):
            M[i, l] = self.diagonal[i]
        return FMatrix(F, M)

    def to_dict(self) -> dict[str, Any]:
        return {"permutation": list(self.permutation), "diagonal": list(self.diagonal)}


def _same_field(a: FMatrix, b: FMatrix) -> None:
    if a.field != b.field:
        raise ShapeMismatch("matrices live over different fields")


# -- raw-array kernels --------------------------------------------------------


def matmul(F: Field, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Field matrix product of index arrays.

    Elements are split into their prime-field coefficient vectors and the
    ``m**2`` integer products are done by BLAS in float64, which is exact
    because every partial sum stays far below 2**53.
    """
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    p, m = F.p, F.m
    if X.shape[-1] == 0:
        return np.zeros(X.shape[:-1] + Y.shape[1:], dtype=np.int64)
    if m == 1:
        return (X.astype(np.float64) @ Y.astype(np.float64)).astype(np.int64) % p
    Dx = F._digits[X].astype(np.float64)
    Dy = F._digits[Y].astype(np.float64)
    prod = [np.zeros(X.shape[:-1] + Y.shape[1:], dtype=np.int64) for _ in range(2 * m - 1)]
    for i in range(m):
        for j in range(m):
            prod[i + j] += (Dx[..., i] @ Dy[..., j]).astype(np.int64)
    prod = [c % p for c in prod]
    f = F.modulus
    for top in range(2 * m - 2, m - 1, -1):
        c = prod[top]
        for i in range(m):
            prod[top - m + i] = (prod[top - m + i] - c * f[i]) % p
    enc = sum(prod[i] * int(F._pw[i]) for i in range(m))
    return F._idx_of_enc[enc]


def _rref(F: Field, M: np.ndarray) -> tuple[np.ndarray, int, list[int]]:
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    prime = F.m == 1
    p = F.p
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = F.inv(int(R[r, c]))
        if prime:
            R[r] = R[r] * inv % p
            factors = R[:, c].copy()
            factors[r] = 0
            live = np.flatnonzero(factors)
            if live.size:
                R[live] = (R[live] - np.outer(factors[live], R[r])) % p
        else:
            R[r] = F.mul(R[r], inv)
            factors = R[:, c].copy()
            factors[r] = 0
            live = np.flatnonzero(factors)
            if live.size:
                R[live] = F.sub(R[live], F.mul(factors[live][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, pivots


def _rank(F: Field, M: np.ndarray) -> int:
    return _rref(F, M)[1]


def _row_basis(F: Field, M: np.ndarray) -> np.ndarray:
    """RREF rows spanning the row space of ``M`` (zero rows dropped)."""
    R, r, _ = _rref(F, M)
    return R[:r]


def _nullspace(F: Field, M: np.ndarray) -> np.ndarray:
    """Rows spanning ``{x : M x^t = 0}``, in a canonical (RREF-derived) order."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R, r, pivots = _rref(F, M)
    free = [c for c in range(n) if c not in set(pivots)]
    N = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        N[t, f] = 1
        if r:
            N[t, pivots] = F.neg(R[:r, f])
    return N


def _invert(F: Field, M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    if M.shape != (n, n):
        raise ShapeMismatch("only square matrices can be inverted")
    aug = np.concatenate([M, np.eye(n, dtype=np.int64)], axis=1)
    R, r, pivots = _rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise Singular("matrix is singular")
    return R[:, n:]


# -- public operations ---------------------------------------------------------


def identity(F: Field, n: int) -> FMatrix:
    return FMatrix(F, np.eye(n, dtype=np.int64))


def zeros(F: Field, rows: int, cols: int) -> FMatrix:
    return FMatrix(F, np.zeros((rows, cols), dtype=np.int64))


def from_rows(F: Field, rows: Sequence[Sequence[int]]) -> FMatrix:
    return FMatrix(F, np.array(rows, dtype=np.int64))


def rref(M: FMatrix) -> tuple[FMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and (0-based) pivot columns."""
    R, r, piv = _rref(M.field, M.entries)
    return FMatrix(M.field, R), r, piv


def rank(M: FMatrix) -> int:
    return _rank(M.field, M.entries)


def invert(M: FMatrix) -> FMatrix:
    return FMatrix(M.field, _invert(M.field, M.entries))


def nullspace(M: FMatrix) -> FMatrix:
    return FMatrix(M.field, _nullspace(M.field, M.entries).reshape(-1, M.cols))


def conj_transpose(M: FMatrix) -> FMatrix:
    """``M^dagger``: entrywise Frobenius conjugate of the transpose."""
    return M.T.conj()


def is_nsc(A: FMatrix) -> bool:
    """Non-singular by columns, checked over every leading-row minor."""
    F = A.field
    s, h = A.shape
    if s > h or rank(A) != s:
        raise NotFullRank(f"NSC needs a full-rank s x h matrix with s <= h, got rank {rank(A)}")
    if h > F.q:
        return False
    for i in range(1, s + 1):
        rows = A.entries[:i]
        for cols in combinations(range(h), i):
            if _rank(F, rows[:, cols]) < i:
                return False
    return True


def monomial_decompose(M: FMatrix) -> MonomialWitness | None:
    """Write ``M`` as diagonal times permutation, or return ``None``."""
    if M.rows != M.cols:
        return None
    nz = M.entries != 0
    if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
        return None
    n = M.rows
    perm = [0] * n
    diag = [0] * n
    for i in range(n):
        l = int(np.flatnonzero(nz[i])[0])
        perm[l] = i
        diag[i] = int(M.entries[i, l])
    return MonomialWitness(tuple(perm), tuple(diag))


def complete_to_invertible(A: FMatrix) -> FMatrix:
    """Extend full-rank ``A`` to an invertible square matrix by appending unit rows."""
    F = A.field
    s, h = A.shape
    if s > h or rank(A) != s:
        raise NotFullRank("completion needs a full-rank matrix with at most as many rows as columns")
    rows = [r for r in A.entries]
    current = s
    for e in np.eye(h, dtype=np.int64):
        if current == h:
            break
        trial = np.array(rows + [e])
        if _rank(F, trial) > current:
            rows.append(e)
            current += 1
    return FMatrix(F, np.array(rows, dtype=np.int64).reshape(h, h))


def hstack(mats: Sequence[FMatrix]) -> FMatrix:
    return FMatrix(mats[0].field, np.concatenate([m.entries for m in mats], axis=1))


def vstack(mats: Sequence[FMatrix]) -> FMatrix:
    return FMatrix(mats[0].field, np.concatenate([m.entries for m in mats], axis=0))
