"""Linear codes held as row-reduced generator matrices.

A :class:`LinearCode` stores the RREF basis of its row space, so two codes are
equal exactly when their stored generators are equal.  Minimum distances come
with a :class:`DistanceCertificate` saying whether the value is exact or only a
lower bound, and how it was obtained.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    CodingError,
    ConstructionFailed,
    EmptySet,
    FieldExhausted,
    NonSquareOrder,
    OutOfRange,
    RepeatedPoint,
    ShapeMismatch,
    TooLong,
    ZeroMatrix,
    ZeroMultiplier,
)
from .fmatrix import FMatrix, _nullspace, _rank, _row_basis, matmul
from .gf import Field, make_field

Unbounded = math.inf

EXACT = "Exact"
LOWER = "LowerBound"

DEFAULT_BUDGET = 2**22
_CHUNK = 1 << 15


def default_budget() -> int:
    """Enumeration budget, overridable through the ``QLRC_BUDGET`` environment variable."""
    return int(os.environ.get("QLRC_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class DistanceCertificate:
    value: float | int
    kind: str = EXACT
    method: str = "enumeration"

    @property
    def exact(self) -> bool:
        return self.kind == EXACT

    @property
    def unbounded(self) -> bool:
        return self.value == Unbounded

    def to_dict(self) -> dict[str, Any]:
        v = "unbounded" if self.unbounded else int(self.value)
        return {"value": v, "kind": self.kind, "method": self.method}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> DistanceCertificate:
        v = Unbounded if d["value"] == "unbounded" else int(d["value"])
        return cls(v, d["kind"], d["method"])


UNBOUNDED_CERT = DistanceCertificate(Unbounded, EXACT, "zero-code")


class LinearCode:
    """An ``[n, k]`` code over ``field`` given by any generator matrix.

    ``certificate`` records distance knowledge available at construction
    (for instance the MDS property of a Reed-Solomon code).  ``frame`` holds
    evaluation points and column multipliers for GRS-type codes so they can be
    enlarged later.
    """

    def __init__(
        self,
        field: Field,
        generator: np.ndarray | FMatrix,
        *,
        n: int | None = None,
        certificate: DistanceCertificate | None = None,
        frame: dict[str, Any] | None = None,
        reduced: bool = False,
    ):
        G = generator.entries if isinstance(generator, FMatrix) else np.asarray(generator, dtype=np.int64)
        if G.ndim == 1:
            G = G.reshape(0 if G.size == 0 else 1, -1) if n is None else G.reshape(-1, n)
        if n is None:
            n = G.shape[1]
        G = G.reshape(-1, n)
        basis = G if reduced else _row_basis(field, G)
        basis = np.ascontiguousarray(basis, dtype=np.int64)
        basis.setflags(write=False)
        self.field = field
        self.n = int(n)
        self._G = basis
        self.k = int(basis.shape[0])
        self.certificate = UNBOUNDED_CERT if self.k == 0 else certificate
        self.frame = frame
        self._distance: dict[int, DistanceCertificate] = {}

    # -- views --------------------------------------------------------------

    @property
    def generator(self) -> FMatrix:
        return FMatrix(self.field, self._G)

    @property
    def G(self) -> np.ndarray:
        return self._G

    @property
    def nondegenerate(self) -> bool:
        return bool(np.all(np.any(self._G != 0, axis=0))) if self.k else self.n == 0

    @property
    def is_full(self) -> bool:
        return self.k == self.n

    def __repr__(self) -> str:
        return f"LinearCode([{self.n}, {self.k}] over GF({self.field.q}))"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LinearCode)
            and self.field == other.field
            and self.n == other.n
            and self.k == other.k
            and bool(np.array_equal(self._G, other._G))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.n, self._G.tobytes()))

    def encode(self, msgs: np.ndarray) -> np.ndarray:
        return matmul(self.field, np.atleast_2d(msgs), self._G)

    def contains_vectors(self, V: np.ndarray) -> bool:
        V = np.atleast_2d(np.asarray(V, dtype=np.int64))
        if V.size == 0:
            return True
        return _rank(self.field, np.concatenate([self._G, V])) == self.k

    # -- serialization ------------------------------------------------------

    def to_dict(self, with_distance: bool = True) -> dict[str, Any]:
        d: dict[str, Any] = {
            "field": self.field.to_dict(),
            "n": self.n,
            "k": self.k,
            "generator": self._G.tolist(),
        }
        cert = None
        if with_distance:
            cert = self.known_distance()
        d["distance"] = cert.to_dict() if cert else None
        if self.frame is not None:
            d["frame"] = self.frame
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> LinearCode:
        F = make_field(**d["field"])
        G = np.array(d["generator"], dtype=np.int64).reshape(-1, d["n"])
        # stored distances are never trusted; min_distance re-derives them
        return cls(F, G, n=d["n"], frame=d.get("frame"))

    def known_distance(self) -> DistanceCertificate | None:
        if self._distance:
            return max(self._distance.values(), key=lambda c: (c.exact, c.value))
        return self.certificate


# -- constructors ---------------------------------------------------------------


def code_from_generator(F: Field, G: FMatrix | np.ndarray | Sequence[Sequence[int]]) -> LinearCode:
    arr = G.entries if isinstance(G, FMatrix) else np.array(G, dtype=np.int64)
    if arr.size == 0 or not np.any(arr):
        raise ZeroMatrix("generator matrix is zero")
    return LinearCode(F, arr)


def zero_code(F: Field, n: int) -> LinearCode:
    return LinearCode(F, np.zeros((0, n), dtype=np.int64), n=n, reduced=True)


def full_space(F: Field, n: int) -> LinearCode:
    return LinearCode(
        F, np.eye(n, dtype=np.int64), reduced=True, certificate=DistanceCertificate(1, EXACT, "MDS")
    )


def grs(
    F: Field,
    points: Sequence[int],
    multipliers: Sequence[int] | None,
    k: int,
) -> LinearCode:
    """Generalized Reed-Solomon code: row ``i`` is ``v_j * x_j**i`` over the points."""
    pts = np.asarray(points, dtype=np.int64)
    m = len(pts)
    if m > F.q:
        raise TooLong(f"length {m} exceeds field order {F.q}")
    if len(set(pts.tolist())) != m:
        raise RepeatedPoint("evaluation points must be distinct")
    mult = np.ones(m, dtype=np.int64) if multipliers is None else np.asarray(multipliers, dtype=np.int64)
    if len(mult) != m:
        raise ShapeMismatch("one multiplier per point")
    if np.any(mult == 0):
        raise ZeroMultiplier("multipliers must be nonzero")
    if not 0 <= k <= m:
        raise OutOfRange(f"dimension {k} outside [0, {m}]")
    rows = np.array([F.mul(mult, F.pow(pts, i)) for i in range(k)], dtype=np.int64).reshape(k, m)
    frame = {"points": pts.tolist(), "multipliers": mult.tolist()}
    cert = DistanceCertificate(m - k + 1, EXACT, "MDS") if k else None
    return LinearCode(F, rows, n=m, certificate=cert, frame=frame)


def rs(F: Field, m: int, k: int) -> LinearCode:
    """Reed-Solomon code evaluating ``1, X, ..., X^(k-1)`` at the first ``m`` elements."""
    if m > F.q:
        raise TooLong(f"length {m} exceeds field order {F.q}")
    return grs(F, range(m), None, k)


def rs_enlarge(C: LinearCode) -> LinearCode:
    """Append the evaluation at the next unused field element (multiplier 1)."""
    if C.frame is None:
        raise ConstructionFailed("code carries no evaluation frame to enlarge")
    pts = list(C.frame["points"])
    mult = list(C.frame["multipliers"])
    unused = [x for x in range(C.field.q) if x not in set(pts)]
    if not unused:
        raise FieldExhausted("every field element is already an evaluation point")
    return grs(C.field, pts + [unused[0]], mult + [1], C.k)


# -- duality and containment ----------------------------------------------------


def _check_kind(F: Field, kind: str) -> None:
    if kind not in ("euclidean", "hermitian"):
        raise ValueError(f"unknown inner product {kind!r}")
    if kind == "hermitian" and not F.is_square_order:
        raise NonSquareOrder(f"Hermitian duality needs a square order, GF({F.q}) is not")


def dual(C: LinearCode, kind: str = "euclidean") -> LinearCode:
    """Orthogonal complement under the Euclidean or Hermitian form."""
    F = C.field
    _check_kind(F, kind)
    N = _nullspace(F, C._G) if C.k else np.eye(C.n, dtype=np.int64)
    N = N.reshape(-1, C.n)
    if kind == "hermitian":
        N = np.asarray(F.conj(N)).reshape(-1, C.n)
    cert = None
    known = C.known_distance()
    if known is not None and known.exact and C.k and known.value == C.n - C.k + 1:
        cert = DistanceCertificate(C.k + 1, EXACT, "MDS")  # duals of MDS codes are MDS
    return LinearCode(F, N, n=C.n, certificate=cert)


def inner_products(F: Field, X: np.ndarray, Y: np.ndarray, kind: str = "euclidean") -> np.ndarray:
    """Gram matrix ``X Y^t`` (Euclidean) or ``X (Y^q)^t`` (Hermitian)."""
    X = np.atleast_2d(X)
    Y = np.atleast_2d(Y)
    if kind == "hermitian":
        Y = np.asarray(F.conj(Y)).reshape(Y.shape)
    return matmul(F, X, Y.T)


def contains(C: LinearCode, D: LinearCode) -> bool:
    """Whether ``D`` is a subcode of ``C``."""
    if C.field != D.field or C.n != D.n:
        raise ShapeMismatch("codes differ in field or length")
    if D.k > C.k:
        return False
    return C.contains_vectors(D._G)


def is_dual_containing(C: LinearCode, kind: str = "euclidean") -> bool:
    return contains(C, dual(C, kind))


def puncture(C: LinearCode, S: Iterable[int]) -> LinearCode:
    """Projection of ``C`` onto the 0-based coordinates ``S`` (in the given order)."""
    idx = list(dict.fromkeys(int(s) for s in S))
    if not idx:
        raise EmptySet("puncturing set is empty")
    if min(idx) < 0 or max(idx) >= C.n:
        raise OutOfRange(f"coordinates must lie in [0, {C.n})")
    sub = C._G[:, idx]
    cert = None
    known = C.known_distance()
    if known is not None and known.exact and C.k and known.value == C.n - C.k + 1 and len(idx) >= C.k:
        cert = DistanceCertificate(len(idx) - C.k + 1, EXACT, "MDS")
    return LinearCode(C.field, sub, n=len(idx), certificate=cert)


# -- distances ------------------------------------------------------------------


def _messages(q: int, k: int, lead: int, start: int, stop: int) -> np.ndarray:
    """Messages with zeros before ``lead``, a one at ``lead`` and free digits after."""
    free = k - lead - 1
    t = np.arange(start, stop, dtype=np.int64)
    M = np.zeros((len(t), k), dtype=np.int64)
    M[:, lead] = 1
    for j in range(free):
        M[:, k - 1 - j] = t % q
        t = t // q
    return M


def _normalized_weights(C: LinearCode) -> Iterator[np.ndarray]:
    """Weights of one codeword per nonzero projective point of ``C``."""
    q, k = C.field.q, C.k
    for lead in range(k):
        total = q ** (k - lead - 1)
        for start in range(0, total, _CHUNK):
            M = _messages(q, k, lead, start, min(total, start + _CHUNK))
            yield np.count_nonzero(C.encode(M), axis=1)


def weight_distribution(C: LinearCode) -> list[int]:
    """Number of codewords of each weight ``0..n`` by enumeration."""
    counts = np.zeros(C.n + 1, dtype=object)
    counts[0] = 1
    for w in _normalized_weights(C):
        counts += np.bincount(w, minlength=C.n + 1).astype(object) * (C.field.q - 1)
    return [int(c) for c in counts]


def _krawtchouk(n: int, q: int, w: int, j: int) -> int:
    return sum(
        (-1) ** s * (q - 1) ** (w - s) * math.comb(j, s) * math.comb(n - j, w - s) for s in range(w + 1)
    )


def macwilliams_min_distance(n: int, q: int, dual_weights: Sequence[int]) -> int:
    """Minimum distance of a code from the weight distribution of its dual."""
    size = sum(dual_weights)
    for w in range(1, n + 1):
        a = sum(b * _krawtchouk(n, q, w, j) for j, b in enumerate(dual_weights) if b)
        if a % size:
            raise ArithmeticError("MacWilliams transform produced a non-integer")
        if a:
            return w
    return Unbounded  # type: ignore[return-value]


def _recognize_rs(C: LinearCode) -> bool:
    """True when ``C`` equals the (generalized) Reed-Solomon code of its frame, or the plain one."""
    if C.n > C.field.q or C.k == 0:
        return False
    if C.frame is not None:
        try:
            if grs(C.field, C.frame["points"], C.frame["multipliers"], C.k) == C:
                return True
        except CodingError:
            pass
    return rs(C.field, C.n, C.k) == C


def min_distance(C: LinearCode, budget: int | None = None) -> DistanceCertificate:
    """Certified minimum distance.

    Tries, in order: the zero code, an exact certificate stored on the code,
    enumeration of codewords when ``q**k <= budget``, enumeration of the dual
    plus the MacWilliams identities when ``q**(n-k) <= budget``, recognition as
    a Reed-Solomon code, and finally the best stored lower bound.
    """
    budget = default_budget() if budget is None else budget
    if C.k == 0:
        return UNBOUNDED_CERT
    if C.certificate is not None and C.certificate.exact:
        return C.certificate
    for cert in C._distance.values():
        if cert.exact:
            return cert
    q = C.field.q
    if C.k == C.n:
        cert = DistanceCertificate(1, EXACT, "MDS")
    elif q**C.k <= budget:
        d = min(int(w.min()) for w in _normalized_weights(C))
        cert = DistanceCertificate(d, EXACT, "enumeration")
    elif q ** (C.n - C.k) <= budget:
        D = dual(C, "euclidean")
        cert = DistanceCertificate(
            macwilliams_min_distance(C.n, q, weight_distribution(D)), EXACT, "dual-enumeration"
        )
    elif _recognize_rs(C):
        cert = DistanceCertificate(C.n - C.k + 1, EXACT, "MDS")
    elif C.certificate is not None:
        cert = C.certificate
    else:
        cert = DistanceCertificate(1, LOWER, "trivial-bound")
    C._distance[budget] = cert
    return cert


def brute_force_distance(C: LinearCode) -> float | int:
    """Minimum weight over all ``q**k`` messages; an independent test oracle."""
    if C.k == 0:
        return Unbounded
    q, k = C.field.q, C.k
    best = C.n
    total = q**k
    for start in range(1, total, _CHUNK):
        t = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        M = np.stack([(t // q**j) % q for j in range(k)], axis=1)
        best = min(best, int(np.count_nonzero(C.encode(M), axis=1).min()))
    return best


def is_mds(C: LinearCode) -> bool:
    """Every ``k`` columns independent (exhaustive)."""
    if C.k == 0:
        return True
    return all(_rank(C.field, C._G[:, list(cols)]) == C.k for cols in combinations(range(C.n), C.k))


# -- dual-containing GRS frames -------------------------------------------------


def _grs_dual_multipliers(F: Field, points: Sequence[int]) -> np.ndarray:
    """``u_i = 1 / prod_{j != i} (x_i - x_j)``; the Euclidean dual of GRS_k(x, v) is GRS_{m-k}(x, u/v)."""
    pts = np.asarray(points, dtype=np.int64)
    u = []
    for i, x in enumerate(pts):
        others = np.delete(pts, i)
        diff = F.sub(x, others)
        prod = 1
        for dlt in np.atleast_1d(diff):
            prod = F.mul(prod, int(dlt))
        u.append(F.inv(prod))
    return np.array(u, dtype=np.int64)


def _candidate_point_sets(F: Field, m: int) -> Iterator[tuple[str, np.ndarray, np.ndarray]]:
    q = F.q
    ones = np.ones(m, dtype=np.int64)
    if m == q:
        yield "full field", np.arange(q), ones
    if m >= 2 and (q - 1) % (m - 1) == 0:
        beta = F.sqrt(F.from_int(1 - m))
        if beta is not None:
            pts = np.concatenate([[0], F.subgroup(m - 1)])
            yield "roots of X^m - X, twisted", pts, np.concatenate([[beta], np.ones(m - 1, dtype=np.int64)])
    if (q - 1) % m == 0:
        yield "roots of X^m - 1", F.subgroup(m), ones
    yield "first m elements", np.arange(m), ones
    # multipliers with v_i^2 proportional to u_i make the dual GRS_{m-k}(x, v)
    for pts in (np.arange(m), np.arange(1, m + 1) if m < q else None):
        if pts is None:
            continue
        u = _grs_dual_multipliers(F, pts)
        roots = [F.sqrt(int(x)) for x in u]
        if all(r is not None for r in roots):
            yield "square-class multipliers", pts, np.array(roots, dtype=np.int64)
        g = F.generator
        roots = [F.sqrt(F.mul(g, int(x))) for x in u]
        if all(r is not None for r in roots):
            yield "square-class multipliers", pts, np.array(roots, dtype=np.int64)


def euclidean_dc_frame(F: Field, m: int, kmin: int) -> dict[str, Any]:
    """A GRS frame of length ``m`` whose codes of every dimension ``>= kmin`` contain their duals.

    Each candidate is verified at ``kmin``; nesting of a fixed frame then
    covers every larger dimension.
    """
    if not 2 * kmin >= m or not 1 <= kmin <= m:
        raise OutOfRange("a GRS code contains its Euclidean dual only when 2k >= m")
    for name, pts, mult in _candidate_point_sets(F, m):
        C = grs(F, pts, mult, kmin)
        if is_dual_containing(C, "euclidean"):
            return {"points": pts.tolist(), "multipliers": mult.tolist(), "name": name}
    raise ConstructionFailed(f"no Euclidean dual-containing GRS frame of length {m} found over GF({F.q})")


def euclidean_dc_grs(F: Field, m: int, k: int) -> LinearCode:
    """A GRS ``[m, k]`` code containing its Euclidean dual."""
    fr = euclidean_dc_frame(F, m, k)
    return grs(F, fr["points"], fr["multipliers"], k)


def parity_dc_code(F: Field, m: int) -> LinearCode:
    """An ``[m, m-1, 2]`` code ``y^perp`` with ``y`` of full weight and ``sum y_i^2 = 0``.

    Such a code contains its Euclidean dual ``<y>``.  The search fixes
    ``y_1 = ... = y_{m-2} = 1``; over GF(5) no length-3 vector qualifies.
    """
    if m < 2:
        raise OutOfRange("length must be at least 2")
    roots = {F.mul(x, x): x for x in range(F.q - 1, 0, -1)}
    rest = F.neg(F.from_int(m - 2))  # y_1 = ... = y_{m-2} = 1
    for a in range(1, F.q):
        target = F.sub(rest, F.mul(a, a))
        if target in roots:
            y = np.ones(m, dtype=np.int64)
            y[m - 2] = a
            y[m - 1] = roots[target]
            C = LinearCode(F, _nullspace(F, y.reshape(1, m)), n=m)
            C.certificate = DistanceCertificate(2, EXACT, "MDS")
            return C
    raise ConstructionFailed(f"no full-weight isotropic vector of length {m} over GF({F.q})")


def hermitian_dc_frame(q: int, a: int, F2: Field | None = None) -> dict[str, Any]:
    """Points and multipliers of length ``q**2 - a`` whose GRS codes of dimension
    at least ``q**2 - q + 1`` contain their Hermitian duals."""
    from .gf import field_of_order

    F2 = F2 if F2 is not None else field_of_order(q * q)
    if not 0 <= a <= q - 2:
        raise OutOfRange(f"a must lie in [0, {q - 2}]")
    m = q * q - a
    kmin = q * q - q + 1
    for name, pts, mult in _hermitian_candidates(F2, q, m):
        C = grs(F2, pts, mult, min(kmin, m))
        if is_dual_containing(C, "hermitian"):
            return {"points": pts.tolist(), "multipliers": mult.tolist(), "name": name}
    raise ConstructionFailed(f"no Hermitian dual-containing GRS frame found for q={q}, a={a}")


def _hermitian_candidates(F2: Field, q: int, m: int) -> Iterator[tuple[str, np.ndarray, np.ndarray]]:
    Q = F2.q
    ones = np.ones(m, dtype=np.int64)
    if m == Q:
        yield "full field", np.arange(Q), ones
    if (Q - 1) % m == 0:
        yield "roots of X^m - 1", F2.subgroup(m), ones
    yield "first m elements", np.arange(m), ones
    yield "nonzero elements", np.arange(1, m + 1), ones
    # norm multipliers: v_i^(q+1) = u_i^q whenever every u_i lies in GF(q)
    norm = {}
    for v in range(1, Q):
        norm.setdefault(F2.pow(v, q + 1), v)
    removed_budget = 4000
    tried = 0
    for T in combinations(range(Q), Q - m):
        tried += 1
        if tried > removed_budget:
            break
        pts = np.array([x for x in range(Q) if x not in set(T)], dtype=np.int64)
        u = _grs_dual_multipliers(F2, pts)
        uq = np.asarray(F2.pow(u, q))
        if all(int(x) in norm for x in uq):
            yield "norm multipliers", pts, np.array([norm[int(x)] for x in uq], dtype=np.int64)


def hermitian_dc_grs(q: int, a: int, k: int) -> LinearCode:
    """A GRS ``[q^2 - a, k]`` code over GF(q^2) containing its Hermitian dual."""
    m = q * q - a
    if not 0 <= a <= q - 2:
        raise OutOfRange(f"a must lie in [0, {q - 2}]")
    if not q * q - q + 1 <= k <= m:
        raise OutOfRange(f"k must lie in [{q * q - q + 1}, {m}]")
    from .gf import field_of_order

    F2 = field_of_order(q * q)
    fr = hermitian_dc_frame(q, a, F2)
    C = grs(F2, fr["points"], fr["multipliers"], k)
    if not is_dual_containing(C, "hermitian"):  # pragma: no cover - frame check covers it
        raise ConstructionFailed("frame verification did not carry over")
    return C
