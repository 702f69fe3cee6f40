"""(r, delta) extended recovery sets and the recovery structures of product codes.

Everything here certifies a claimed structure; nothing searches for the best
locality of an arbitrary code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .code import LOWER, DistanceCertificate, LinearCode, contains, min_distance, puncture
from .errors import CoordinateNotInSet, Degenerate, NonPositive, NotSubcode, UnverifiedMatrixStructure
from .mpc import MpcSpec, ext_layout


@dataclass
class RecoveryStructure:
    """One extended recovery set per coordinate (0-based) plus the claimed ``(r, delta)``."""

    code: LinearCode
    r: int
    delta: int
    sets: list[tuple[int, ...]]
    origin: str = "custom"
    verified: bool = False
    bound_based: bool = False
    failures: list[int] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "delta": self.delta,
            "origin": self.origin,
            "sets": [list(s) for s in self.sets],
            "verified": self.verified,
            "bound_based": self.bound_based,
        }


def _rd2(C: LinearCode, Rbar: Sequence[int], delta: int, budget: int | None) -> tuple[bool, DistanceCertificate]:
    cert = min_distance(puncture(C, sorted(Rbar)), budget)
    return cert.value >= delta, cert


def verify_ers(
    C: LinearCode,
    Rbar: Iterable[int],
    i: int,
    r: int,
    delta: int,
    budget: int | None = None,
) -> bool:
    """RD1 ``|Rbar| <= r + delta - 1`` and RD2 ``d(C[Rbar]) >= delta``."""
    if not C.nondegenerate:
        raise Degenerate("locality is only defined for codes without zero columns")
    Rbar = set(int(x) for x in Rbar)
    if i not in Rbar:
        raise CoordinateNotInSet(f"coordinate {i} is not in its recovery set")
    if len(Rbar) > r + delta - 1:
        return False
    return _rd2(C, sorted(Rbar), delta, budget)[0]


def verify_structure(struct: RecoveryStructure, coords: Iterable[int] | None = None, budget: int | None = None) -> RecoveryStructure:
    """Check every (or the given) coordinate's set; each distinct set is checked once."""
    C = struct.code
    if not C.nondegenerate:
        raise Degenerate("locality is only defined for codes without zero columns")
    if len(struct.sets) != C.n:
        raise ValueError("a recovery structure needs one set per coordinate")
    cache: dict[tuple[int, ...], tuple[bool, bool]] = {}
    failures = []
    bound_based = False
    todo = range(C.n) if coords is None else coords
    for i in todo:
        S = tuple(sorted(struct.sets[i]))
        if i not in S:
            raise CoordinateNotInSet(f"coordinate {i} is not in its recovery set")
        if S not in cache:
            if len(S) > struct.r + struct.delta - 1:
                cache[S] = (False, False)
            else:
                ok, cert = _rd2(C, S, struct.delta, budget)
                cache[S] = (ok, cert.kind == LOWER)
        ok, lb = cache[S]
        bound_based = bound_based or (ok and lb)
        if not ok:
            failures.append(i)
    struct.failures = failures
    struct.bound_based = bound_based
    struct.verified = not failures if coords is None else struct.verified and not failures
    return struct


def custom_recovery(C: LinearCode, sets: Sequence[Iterable[int]], r: int, delta: int, budget: int | None = None) -> RecoveryStructure:
    S = RecoveryStructure(C, r, delta, [tuple(sorted(set(s))) for s in sets], "custom")
    return verify_structure(S, budget=budget)


def whole_support_sets(n: int) -> list[tuple[int, ...]]:
    return [tuple(range(n))] * n


def block_recovery(
    spec: MpcSpec,
    D: LinearCode,
    r: int,
    delta: int,
    D_sets: Sequence[Iterable[int]] | None = None,
    code: LinearCode | None = None,
    budget: int | None = None,
) -> RecoveryStructure:
    """Translate a recovery structure of a supercode ``D`` of every constituent into each block."""
    for C in spec.constituents:
        if not contains(D, C):
            raise NotSubcode("every constituent must be contained in D")
    m = spec.m
    D_sets = whole_support_sets(m) if D_sets is None else [tuple(sorted(set(s))) for s in D_sets]
    base = verify_structure(RecoveryStructure(D, r, delta, list(D_sets)), budget=budget)
    from .mpc import mpc_code

    C = code if code is not None else mpc_code(spec, budget)
    sets = [tuple(j * m + x for x in D_sets[l]) for j in range(spec.h) for l in range(m)]
    S = RecoveryStructure(C, r, delta, sets, "block")
    if not base.verified:
        S.failures = list(range(C.n))
        return S
    return verify_structure(S, budget=budget)


def matrix_code(spec_or_A) -> LinearCode:
    A = spec_or_A.A if isinstance(spec_or_A, MpcSpec) else spec_or_A
    return LinearCode(A.field, A.entries)


def column_recovery(
    spec: MpcSpec,
    r: int,
    delta: int,
    A_sets: Sequence[Iterable[int]] | None = None,
    code: LinearCode | None = None,
    budget: int | None = None,
) -> RecoveryStructure:
    """Translate a recovery structure of the row code of ``A`` across blocks at fixed inner position."""
    h, m = spec.h, spec.m
    A_sets = whole_support_sets(h) if A_sets is None else [tuple(sorted(set(s))) for s in A_sets]
    base = verify_structure(RecoveryStructure(matrix_code(spec), r, delta, list(A_sets)), budget=budget)
    if not base.verified:
        raise UnverifiedMatrixStructure(f"the code of A does not have locality ({r}, {delta})")
    from .mpc import mpc_code

    C = code if code is not None else mpc_code(spec, budget)
    sets = [tuple(t * m + l for t in A_sets[j]) for j in range(h) for l in range(m)]
    return verify_structure(RecoveryStructure(C, r, delta, sets, "column"), budget=budget)


def enlarged_recovery(
    code: LinearCode,
    m: int,
    A_code: LinearCode,
    s_ext: int,
    r: int,
    delta: int,
    A_sets: Sequence[Iterable[int]] | None = None,
    C1hat_sets: Sequence[Iterable[int]] | None = None,
    budget: int | None = None,
) -> RecoveryStructure:
    """Column sets for the original positions, block sets of the enlarged code for the extra ones."""
    h = A_code.n
    layout = ext_layout(m, h, s_ext)
    A_sets = whole_support_sets(h) if A_sets is None else [tuple(s) for s in A_sets]
    hat_sets = whole_support_sets(m + 1) if C1hat_sets is None else [tuple(s) for s in C1hat_sets]
    sets: list[tuple[int, ...]] = []
    for j, block in enumerate(layout):
        for l in range(len(block)):
            if l < m:
                sets.append(tuple(sorted(layout[t][l] for t in A_sets[j])))
            else:
                sets.append(tuple(sorted(block[x] for x in hat_sets[m])))
    return verify_structure(RecoveryStructure(code, r, delta, sets, "enlarged"), budget=budget)


def singleton_defect(n: int, k: int, d: int, r: int, delta: int, form: str = "general") -> int:
    """Slack in ``d + k + (ceil(k/r) - 1)(delta - 1) <= n + 1``.

    ``form="classical"`` gives the ``delta = 2`` form ``n + 2 - d - k - ceil(k/r)``.
    """
    if min(n, k, d, r, delta) <= 0:
        raise NonPositive("all parameters must be positive")
    if form == "classical":
        return n + 2 - d - k - math.ceil(k / r)
    return n + 1 - d - k - (math.ceil(k / r) - 1) * (delta - 1)
