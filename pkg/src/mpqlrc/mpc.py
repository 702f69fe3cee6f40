"""Matrix-product codes ``[C_1, ..., C_s] . A`` and their duals.

Coordinates of a product code are flattened block-major: inner position ``l``
of block ``j`` sits at ``j * m + l`` (all indices 0-based).  The special
matrices here come with their Gram matrices, which is what makes dual
containment reduce to conditions on the constituents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .code import (
    EXACT,
    LOWER,
    DistanceCertificate,
    LinearCode,
    Unbounded,
    contains,
    dual,
    full_space,
    min_distance,
)
from .errors import (
    NonSquareOrder,
    NotEnlargement,
    NotFullRank,
    NotNested,
    NotNsc,
    OutOfRange,
    PreconditionFailed,
    RowCountOutOfRange,
    ShapeMismatch,
    Singular,
    TooWide,
)
from .fmatrix import (
    FMatrix,
    MonomialWitness,
    _invert,
    _rank,
    complete_to_invertible,
    is_nsc,
    matmul,
    monomial_decompose,
)
from .gf import Field, make_field


@dataclass
class MpcSpec:
    """Constituents ``C_1..C_s`` (common field and length ``m``), an ``s x h`` matrix ``A``
    of rank ``s`` and an optional invertible ``h x h`` completion ``B`` with ``B[:s] == A``."""

    constituents: list[LinearCode]
    A: FMatrix
    completion: FMatrix | None = None
    nsc_known: bool = False

    def __post_init__(self) -> None:
        self.constituents = list(self.constituents)
        if not self.constituents:
            raise ShapeMismatch("at least one constituent code is required")
        F = self.A.field
        m = self.constituents[0].n
        for C in self.constituents:
            if C.field != F or C.n != m:
                raise ShapeMismatch("constituents must share the field of A and a common length")
        s, h = self.A.shape
        if s != len(self.constituents):
            raise ShapeMismatch(f"A has {s} rows but {len(self.constituents)} constituents were given")
        if s > h or _rank(F, self.A.entries) != s:
            raise NotFullRank("A must have full row rank s <= h")
        if self.completion is not None:
            B = self.completion
            if B.shape != (h, h) or not np.array_equal(B.entries[:s], self.A.entries):
                raise ShapeMismatch("completion must be h x h and start with the rows of A")
            if _rank(F, B.entries) != h:
                raise Singular("completion is not invertible")

    @property
    def field(self) -> Field:
        return self.A.field

    @property
    def m(self) -> int:
        return self.constituents[0].n

    @property
    def s(self) -> int:
        return self.A.rows

    @property
    def h(self) -> int:
        return self.A.cols

    @property
    def n(self) -> int:
        return self.m * self.h

    @property
    def k(self) -> int:
        return sum(C.k for C in self.constituents)

    def B(self) -> FMatrix:
        return self.completion if self.completion is not None else complete_to_invertible(self.A)

    def nested(self) -> bool:
        Cs = self.constituents
        return all(contains(Cs[i], Cs[i + 1]) for i in range(len(Cs) - 1))

    def to_dict(self) -> dict[str, Any]:
        return {
            "field": self.field.to_dict(),
            "m": self.m,
            "h": self.h,
            "s": self.s,
            "A": self.A.entries.tolist(),
            "constituents": [C.to_dict() for C in self.constituents],
            "B": None if self.completion is None else self.completion.entries.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> MpcSpec:
        F = make_field(**d["field"])
        A = FMatrix(F, np.array(d["A"], dtype=np.int64).reshape(d["s"], d["h"]))
        B = None if d.get("B") is None else FMatrix(F, np.array(d["B"], dtype=np.int64).reshape(d["h"], d["h"]))
        return cls([LinearCode.from_dict(c) for c in d["constituents"]], A, B)


def coordinate(m: int, j: int, l: int) -> int:
    """Flat index of inner position ``l`` in block ``j``."""
    return j * m + l


def mpc_generator(spec: MpcSpec) -> np.ndarray:
    """The block generator matrix ``(a_ij G_i)``."""
    F = spec.field
    rows = []
    for i, C in enumerate(spec.constituents):
        if C.k == 0:
            continue
        blocks = [np.asarray(F.mul(int(a), C.G)).reshape(C.k, C.n) for a in spec.A.entries[i]]
        rows.append(np.concatenate(blocks, axis=1))
    if not rows:
        return np.zeros((0, spec.n), dtype=np.int64)
    return np.concatenate(rows, axis=0)


def prefix_distances(A: FMatrix, nsc_known: bool = False) -> list[DistanceCertificate]:
    """Certified distances of the codes spanned by the first ``i`` rows of ``A``."""
    s, h = A.shape
    if nsc_known:
        return [DistanceCertificate(h - i, EXACT, "MDS") for i in range(s)]
    return [min_distance(LinearCode(A.field, A.entries[: i + 1])) for i in range(s)]


NSC_EXHAUSTIVE_LIMIT = 10


def certify_nsc(A: FMatrix) -> bool:
    """Decide NSC exhaustively for narrow matrices; for wide ones, recognize every
    proper prefix code as the Reed-Solomon code on the enumerated field elements."""
    s, h = A.shape
    if h <= NSC_EXHAUSTIVE_LIMIT:
        return is_nsc(A)
    from .code import rs

    F = A.field
    if h > F.q or _rank(F, A.entries) != s:
        return False
    for i in range(1, min(s, h - 1) + 1):
        if LinearCode(F, A.entries[:i]) != rs(F, h, i):
            return False
    return True


def mpc_distance(spec: MpcSpec, budget: int | None = None) -> DistanceCertificate:
    """``min_i d(C_i) d(A_i)``; exact when the constituents are nested."""
    dA = prefix_distances(spec.A, spec.nsc_known)
    terms = []
    exact = True
    for C, da in zip(spec.constituents, dA):
        dc = min_distance(C, budget)
        if dc.unbounded:
            continue
        terms.append(dc.value * da.value)
        exact = exact and dc.exact and da.exact
    if not terms:
        return DistanceCertificate(Unbounded, EXACT, "zero-code")
    exact = exact and spec.nested()
    return DistanceCertificate(int(min(terms)), EXACT if exact else LOWER, "nested-MPC-formula")


def mpc_code(spec: MpcSpec, budget: int | None = None, with_distance: bool = True) -> LinearCode:
    cert = mpc_distance(spec, budget) if with_distance else None
    return LinearCode(spec.field, mpc_generator(spec), n=spec.n, certificate=cert)


# -- special matrices -------------------------------------------------------------


def _eval_rows(F: Field, points: np.ndarray, count: int) -> np.ndarray:
    return np.array([F.pow(points, i) for i in range(count)], dtype=np.int64).reshape(count, len(points))


def vandermonde(F: Field, h: int, s: int) -> FMatrix:
    """``A(h, s)``: row ``i`` evaluates ``X^i`` at the first ``h`` enumerated elements."""
    if h > F.q:
        raise TooWide(f"no NSC matrix with {h} > q = {F.q} columns")
    if not 1 <= s <= h:
        raise OutOfRange(f"need 1 <= s <= h, got s={s}, h={h}")
    return FMatrix(F, _eval_rows(F, np.arange(h), s))


def gram(B: FMatrix, kind: str = "euclidean") -> FMatrix:
    """``B B^t`` (Euclidean) or ``B^q B^t`` (Hermitian)."""
    F = B.field
    if kind == "hermitian":
        return FMatrix(F, matmul(F, np.asarray(F.conj(B.entries)).reshape(B.shape), B.entries.T))
    return FMatrix(F, matmul(F, B.entries, B.entries.T))


def euclidean_selforth_matrix(F: Field, h: int, variant: str = "full_q") -> tuple[FMatrix, MonomialWitness]:
    """An ``h x h`` NSC matrix whose Euclidean Gram matrix is monomial.

    ``full_q``: ``h = q``, rows ``w_1..w_{q-1}`` and ``w_q + lam w_1``; Gram ``-antidiag``.
    ``roots_of_Xh_minus_X``: points ``{0} + mu_{h-1}``, first coordinate twisted by
    ``beta`` with ``beta^2 = 1-h``; Gram ``(h-1) antidiag``.
    ``roots_of_Xh_minus_1``: points ``mu_h``; Gram ``h`` at ``(0,0)`` and on ``i+j = h``.
    """
    lam = F.lam
    if variant == "full_q":
        if h != F.q:
            raise PreconditionFailed("h = q")
        W = _eval_rows(F, np.arange(h), h)
        W[h - 1] = F.add(W[h - 1], F.mul(lam, W[0]))
        B = FMatrix(F, W)
    elif variant == "roots_of_Xh_minus_X":
        if h < 2 or (F.q - 1) % (h - 1):
            raise PreconditionFailed("h-1 divides q-1")
        beta = F.sqrt(F.from_int(1 - h))
        if beta is None:
            raise PreconditionFailed("1-h is a square")
        pts = np.concatenate([[0], F.subgroup(h - 1)]).astype(np.int64)
        W = _eval_rows(F, pts, h)
        a1 = np.ones(h, dtype=np.int64)
        a1[0] = beta
        W[0] = a1
        W[h - 1] = F.add(W[h - 1], F.mul(lam, a1))
        B = FMatrix(F, W)
    elif variant == "roots_of_Xh_minus_1":
        if h < 1 or (F.q - 1) % h:
            raise PreconditionFailed("h divides q-1")
        B = FMatrix(F, _eval_rows(F, F.subgroup(h), h))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    wit = monomial_decompose(gram(B))
    if wit is None:  # pragma: no cover - guaranteed by the power-sum identities
        raise PreconditionFailed("monomial Gram matrix")
    return B, wit


def addot(F2: Field) -> FMatrix:
    """The ``q^2 x q^2`` matrix over GF(q^2): rows ``w_1..w_{q^2-1}`` and ``w_{q^2} + lam w_1``."""
    Q = F2.q
    F2.sqrt_order  # raises NonSquareOrder
    W = _eval_rows(F2, np.arange(Q), Q)
    W[Q - 1] = F2.add(W[Q - 1], F2.mul(F2.lam, W[0]))
    return FMatrix(F2, W)


def hermitian_selforth_matrix(F2: Field) -> tuple[FMatrix, tuple[int, ...]]:
    """``A_ddot`` and the involution ``sigma`` with ``<a_i, a_sigma(i)>_H = -1``."""
    if not F2.is_square_order:
        raise NonSquareOrder(f"GF({F2.q}) does not have square order")
    A = addot(F2)
    G = gram(A, "hermitian").T  # entry (i, j) = <a_i, a_j>_H
    minus_one = F2.neg(1)
    nz = G.entries != 0
    if not (np.all(G.entries[nz] == minus_one) and np.all(nz.sum(0) == 1) and np.all(nz.sum(1) == 1)):
        raise PreconditionFailed("-A A^dagger is a permutation matrix")  # pragma: no cover
    sigma = tuple(int(np.flatnonzero(nz[i])[0]) for i in range(F2.q))
    return A, sigma


def self_paired_rows(q: int) -> list[int]:
    """0-based indices ``i`` with ``<a_i, a_i>_H = -1``: ``q + r(q-1) - 1`` for ``r < q``."""
    return [q + r * (q - 1) - 1 for r in range(q)]


def bsigma_order(sigma: Sequence[int]) -> list[int]:
    """Row order giving Hermitian Gram ``diag(-I_q, -antidiag)``.

    Self-paired rows come first in ascending order; then the smaller member of
    each pair fills the next positions ascending, and partners are mirrored
    from the end.
    """
    Q = len(sigma)
    fixed = [i for i in range(Q) if sigma[i] == i]
    small = sorted(i for i in range(Q) if sigma[i] > i)
    order = fixed + small + [sigma[i] for i in reversed(small)]
    return order


def hermitian_ordered_matrix(F2: Field, s: int) -> FMatrix:
    """First ``s`` rows of ``B_sigma``; requires ``(q^2+q)/2 < s <= q^2``."""
    q = F2.sqrt_order
    Q = q * q
    if not (Q + q) // 2 < s <= Q:
        raise RowCountOutOfRange(f"s must satisfy {(Q + q) // 2} < s <= {Q}")
    A, sigma = hermitian_selforth_matrix(F2)
    order = bsigma_order(sigma)
    return FMatrix(F2, A.entries[order[:s]])


# -- duals and dual containment --------------------------------------------------


def _conj_matrix(F: Field, M: np.ndarray) -> np.ndarray:
    return np.asarray(F.conj(M)).reshape(M.shape)


def dual_matrix(B: FMatrix, kind: str = "euclidean") -> FMatrix:
    """``(B^{-1})^t`` or ``((B^q)^{-1})^t``."""
    F = B.field
    M = B.entries
    if kind == "hermitian":
        if not F.is_square_order:
            raise NonSquareOrder(f"GF({F.q}) does not have square order")
        M = _conj_matrix(F, M)
    return FMatrix(F, _invert(F, M).T.copy())


def mpc_dual_spec(spec: MpcSpec, kind: str = "euclidean") -> MpcSpec:
    """The product-code description of the dual: ``[C_i^perp..., F...F] . (B^-1)^t``."""
    B = spec.B()
    F = spec.field
    duals = [dual(C, kind) for C in spec.constituents]
    duals += [full_space(F, spec.m) for _ in range(spec.h - spec.s)]
    M = dual_matrix(B, kind)
    return MpcSpec(duals, M, M)


def mpc_dual(spec: MpcSpec, kind: str = "euclidean") -> LinearCode:
    return mpc_code(mpc_dual_spec(spec, kind), with_distance=False)


@dataclass
class GramReport:
    """Outcome of the four zeta conditions; pairs ``(t, j)`` are 0-based."""

    kind: str
    zeta: FMatrix
    violations: dict[int, list[tuple[int, int]]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    @property
    def failing_conditions(self) -> list[int]:
        return [c for c in (1, 2, 3, 4) if self.violations.get(c)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "zeta": self.zeta.entries.tolist(),
            "conditions": {str(c): {"passed": not self.violations.get(c), "violations": [list(p) for p in self.violations.get(c, [])]} for c in (1, 2, 3, 4)},
            "passed": self.passed,
        }


def check_dual_containing(spec: MpcSpec, kind: str = "euclidean") -> GramReport:
    """Evaluate the zeta criterion with ``zeta = (B B^t)^-1`` or ``(B^q B^t)^-1``."""
    F = spec.field
    B = spec.B()
    zeta = FMatrix(F, _invert(F, gram(B, kind).entries))
    s, h = spec.s, spec.h
    Cs = spec.constituents
    Z = zeta.entries
    viol: dict[int, list[tuple[int, int]]] = {1: [], 2: [], 3: [], 4: []}
    duals: dict[int, LinearCode] = {}
    for t in range(h):
        for j in range(h):
            if Z[t, j] == 0:
                continue
            if t >= s and j >= s:
                viol[1].append((t, j))
            elif t < s <= j:
                if not Cs[t].is_full:
                    viol[2].append((t, j))
            elif j < s <= t:
                if not Cs[j].is_full:
                    viol[3].append((t, j))
            else:
                if t not in duals:
                    duals[t] = dual(Cs[t], kind)
                if not contains(Cs[j], duals[t]):
                    viol[4].append((t, j))
    return GramReport(kind, zeta, viol)


def mpc_dual_distance_bound(spec: MpcSpec, budget: int | None = None) -> float | int:
    """``min{s+1 (when s < h), s d(C_s^perp), ..., 1 d(C_1^perp)}`` for NSC ``A``.

    Zero duals contribute no finite term.  The Euclidean and Hermitian duals
    of a constituent are isometric, so one bound serves both forms.
    """
    if not spec.nsc_known and not is_nsc(spec.A):
        raise NotNsc("the dual distance bound needs an NSC matrix")
    terms: list[float] = [spec.s + 1] if spec.s < spec.h else []
    for i, C in enumerate(spec.constituents, start=1):
        d = min_distance(dual(C, "euclidean"), budget)
        terms.append(i * d.value)
    return min(terms) if terms else Unbounded


# -- enlarged product codes ---------------------------------------------------------


def check_enlargement(Chat: LinearCode, C: LinearCode, budget: int | None = None) -> None:
    """``Chat`` punctured on its last coordinate is ``C`` with the same dimension and ``d + 1``."""
    from .code import puncture

    if Chat.n != C.n + 1 or Chat.k != C.k:
        raise NotEnlargement("an enlargement adds one coordinate and keeps the dimension")
    if puncture(Chat, range(C.n)) != C:
        raise NotEnlargement("deleting the last coordinate does not give the original code")
    d, dh = min_distance(C, budget), min_distance(Chat, budget)
    if d.exact and dh.exact and dh.value != d.value + 1:
        raise NotEnlargement(f"distance {dh.value} is not {d.value} + 1")


def ext_layout(m: int, h: int, s_ext: int) -> list[range]:
    """Flat coordinate ranges of the ``h`` blocks; the first ``s_ext`` have length ``m + 1``."""
    out, pos = [], 0
    for j in range(h):
        size = m + 1 if j < s_ext else m
        out.append(range(pos, pos + size))
        pos += size
    return out


def ext_distance_bound(d1: int, d2: int, h: int, s_ext: int) -> int:
    return min(d1 * h + s_ext, d2 * (h - 1) + s_ext - 1)


def ext_mpc_code(
    C1hat: LinearCode,
    C1: LinearCode,
    C2hat: LinearCode,
    C2: LinearCode,
    A: FMatrix,
    s_ext: int,
    budget: int | None = None,
) -> LinearCode:
    """Two-row product code whose first ``s_ext`` blocks use the enlarged generators."""
    if not contains(C1, C2) or not contains(C1hat, C2hat):
        raise NotNested("need C1 >= C2 and C1hat >= C2hat")
    check_enlargement(C1hat, C1, budget)
    check_enlargement(C2hat, C2, budget)
    if A.rows != 2:
        raise ShapeMismatch("the enlarged construction uses a 2 x h matrix")
    h = A.cols
    if not 1 <= s_ext <= h:
        raise OutOfRange(f"need 1 <= s_ext <= h, got {s_ext}")
    F = A.field
    rows = []
    for i, Chat in enumerate((C1hat, C2hat)):
        Gh = Chat.G
        G = Gh[:, :-1]
        blocks = [np.asarray(F.mul(int(A.entries[i, j]), Gh if j < s_ext else G)).reshape(Chat.k, -1) for j in range(h)]
        rows.append(np.concatenate(blocks, axis=1))
    d1 = min_distance(C1, budget)
    d2 = min_distance(C2, budget)
    bound = ext_distance_bound(int(d1.value), int(d2.value), h, s_ext)
    n = C1.n * h + s_ext
    return LinearCode(F, np.concatenate(rows), n=n, certificate=DistanceCertificate(bound, LOWER, "enlarged-bound"))
