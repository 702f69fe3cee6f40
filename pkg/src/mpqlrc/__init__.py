"""Matrix-product constructions of quantum locally recoverable codes over finite fields."""

from __future__ import annotations

from .code import DistanceCertificate, LinearCode, brute_force_distance, dual, grs, min_distance, rs
from .errors import ClaimMismatch, CodingError, HypothesisFailed
from .fmatrix import FMatrix, is_nsc
from .gf import Field, field_of_order, make_field
from .mpc import MpcSpec, check_dual_containing, mpc_code, mpc_distance, mpc_dual
from .qlrc import FamilyRequest, FamilyResult, QlrcReport, build_family, quantum_defect, reproduce_table, verify_artifact

__all__ = [
    "ClaimMismatch",
    "CodingError",
    "DistanceCertificate",
    "FMatrix",
    "FamilyRequest",
    "FamilyResult",
    "Field",
    "HypothesisFailed",
    "LinearCode",
    "MpcSpec",
    "QlrcReport",
    "brute_force_distance",
    "build_family",
    "check_dual_containing",
    "dual",
    "field_of_order",
    "grs",
    "is_nsc",
    "make_field",
    "min_distance",
    "mpc_code",
    "mpc_distance",
    "mpc_dual",
    "quantum_defect",
    "reproduce_table",
    "rs",
    "verify_artifact",
]
