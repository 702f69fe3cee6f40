from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpqlrc.code import LinearCode, rs
from mpqlrc.errors import CoordinateNotInSet, Degenerate, NonPositive, NotSubcode, UnverifiedMatrixStructure
from mpqlrc.fmatrix import from_rows
from mpqlrc.gf import make_field
from mpqlrc.locality import (
    RecoveryStructure,
    block_recovery,
    column_recovery,
    custom_recovery,
    singleton_defect,
    verify_ers,
    verify_structure,
    whole_support_sets,
)
from mpqlrc.mpc import MpcSpec, mpc_code, vandermonde

GF3, GF5, GF7 = make_field(3), make_field(5), make_field(7)


class TestVerifyErs:
    def test_rs_5_2_three_coordinates(self):
        assert verify_ers(rs(GF5, 5, 2), {0, 1, 2}, 0, 2, 2)

    def test_mds_whole_support(self):
        h, s = 5, 3
        assert verify_ers(rs(GF5, h, s), range(h), 2, s, h - s + 1)

    def test_rd1_violation(self):
        assert not verify_ers(rs(GF5, 5, 2), {0, 1, 2, 3}, 0, 2, 2)

    def test_punctured_distance_too_small(self):
        assert not verify_ers(rs(GF5, 5, 3), {0, 1, 2}, 0, 2, 2)

    def test_coordinate_must_be_in_set(self):
        with pytest.raises(CoordinateNotInSet):
            verify_ers(rs(GF5, 5, 2), {1, 2}, 0, 2, 2)

    def test_degenerate(self):
        with pytest.raises(Degenerate):
            verify_ers(LinearCode(GF3, [[1, 0, 1]]), {0, 2}, 0, 1, 2)


class TestBlockRecovery:
    def test_rs_supercode_full_block(self):
        m, k = 5, 3
        spec = MpcSpec([rs(GF5, m, k), rs(GF5, m, k)], vandermonde(GF5, 2, 2))
        S = block_recovery(spec, rs(GF5, m, k), k, m - k + 1)
        assert S.verified
        assert len(S.sets) == 10
        assert S.sets[7] == (5, 6, 7, 8, 9)

    def test_single_row_reduces_to_d(self):
        D = rs(GF7, 6, 2)
        spec = MpcSpec([D], from_rows(GF7, [[1]]))
        S = block_recovery(spec, D, 2, 2, D_sets=[(0, 1, 2), (0, 1, 2), (0, 1, 2), (3, 4, 5), (3, 4, 5), (3, 4, 5)])
        assert S.verified
        assert S.sets[4] == (3, 4, 5)

    def test_constituent_outside_d(self):
        spec = MpcSpec([rs(GF5, 5, 3)], from_rows(GF5, [[1]]))
        with pytest.raises(NotSubcode):
            block_recovery(spec, rs(GF5, 5, 2), 2, 4)


class TestColumnRecovery:
    def test_mds_matrix_code(self):
        h, s = 4, 2
        spec = MpcSpec([rs(GF5, 3, 2), rs(GF5, 3, 1)], vandermonde(GF5, h, s))
        S = column_recovery(spec, s, h - s + 1)
        assert S.verified
        assert S.sets[4] == (1, 4, 7, 10)

    def test_repetition(self):
        spec = MpcSpec([rs(GF5, 3, 2)], from_rows(GF5, [[1, 1]]))
        S = column_recovery(spec, 1, 2)
        assert S.verified

    def test_gf3_two_by_three(self):
        spec = MpcSpec([rs(GF3, 3, 2), rs(GF3, 3, 2)], vandermonde(GF3, 3, 2))
        assert column_recovery(spec, 2, 2).verified

    def test_unverified_matrix(self):
        spec = MpcSpec([rs(GF5, 3, 2), rs(GF5, 3, 1)], vandermonde(GF5, 4, 2))
        with pytest.raises(UnverifiedMatrixStructure):
            column_recovery(spec, 1, 2)


class TestSingletonDefect:
    def test_el36_instance(self):
        assert singleton_defect(25, 20, 2, 4, 2) == 0

    def test_mds(self):
        n, k = 7, 4
        assert singleton_defect(n, k, n - k + 1, k, 2, form="classical") == 0

    def test_nine_six(self):
        assert singleton_defect(9, 6, 2, 2, 2) == 0

    def test_non_positive(self):
        with pytest.raises(NonPositive):
            singleton_defect(9, 0, 2, 2, 2)


def test_failures_are_reported():
    C = rs(GF5, 5, 3)
    S = custom_recovery(C, [(i, (i + 1) % 5, (i + 2) % 5) for i in range(5)], 2, 2)
    assert not S.verified
    assert S.failures == [0, 1, 2, 3, 4]


@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_block_and_column_structures_coexist(seed, m, h):
    rng = np.random.default_rng(seed)
    s = int(rng.integers(1, h + 1))
    ks = sorted(rng.integers(1, m + 1, s).tolist(), reverse=True)
    spec = MpcSpec([rs(GF5, m, k) for k in ks], vandermonde(GF5, h, s))
    C = mpc_code(spec)
    k1 = ks[0]
    B = block_recovery(spec, rs(GF5, m, k1), k1, m - k1 + 1, code=C)
    Cr = column_recovery(spec, s, h - s + 1, code=C)
    assert B.verified and Cr.verified
    # each family of sets partitions the coordinates
    for S in (B, Cr):
        distinct = set(S.sets)
        assert sorted(x for t in distinct for x in t) == list(range(C.n))
    # re-verifying a sample of coordinates is idempotent
    sample = rng.choice(C.n, max(1, C.n // 5), replace=False).tolist()
    assert verify_structure(B, sample).verified


@given(st.integers(1, 60), st.integers(1, 60), st.integers(1, 20), st.integers(1, 10), st.integers(1, 10))
def test_defect_formula(n, k, d, r, delta):
    assert singleton_defect(n, k, d, r, delta) == n + 1 - d - k - (-(-k // r) - 1) * (delta - 1)


def test_structure_serialization():
    C = rs(GF5, 4, 2)
    S = verify_structure(RecoveryStructure(C, 2, 3, whole_support_sets(4)))
    d = S.to_dict()
    assert d["verified"] and d["sets"] == [[0, 1, 2, 3]] * 4
