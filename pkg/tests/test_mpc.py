from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpqlrc.code import (
    LOWER,
    LinearCode,
    brute_force_distance,
    contains,
    dual,
    full_space,
    min_distance,
    rs,
    rs_enlarge,
)
from mpqlrc.errors import (
    NotEnlargement,
    NotFullRank,
    NotNested,
    NotNsc,
    PreconditionFailed,
    RowCountOutOfRange,
    ShapeMismatch,
    TooWide,
)
from mpqlrc.fmatrix import FMatrix, _rank, from_rows, is_nsc, monomial_decompose
from mpqlrc.gf import make_field
from mpqlrc.mpc import (
    MpcSpec,
    bsigma_order,
    check_dual_containing,
    complete_to_invertible,
    coordinate,
    euclidean_selforth_matrix,
    ext_distance_bound,
    ext_mpc_code,
    gram,
    hermitian_ordered_matrix,
    hermitian_selforth_matrix,
    mpc_code,
    mpc_distance,
    mpc_dual,
    mpc_dual_distance_bound,
    self_paired_rows,
    vandermonde,
)

from printed_matrices import ADOT_GRAM_Q3, ADOT_Q3, W_Q3, embed
from specgen import random_spec

GF3, GF5, GF7, GF9, GF25 = make_field(3), make_field(5), make_field(7), make_field(3, 2), make_field(5, 2)


def adot(F):
    return euclidean_selforth_matrix(F, F.q, "full_q")[0]


class TestMpcCode:
    def test_plotkin(self):
        u, v = rs(GF5, 4, 3), rs(GF5, 4, 1)
        C = mpc_code(MpcSpec([u, v], from_rows(GF5, [[1, 1], [0, 1]])))
        expected = np.concatenate(
            [np.concatenate([u.G, u.G], axis=1), np.concatenate([np.zeros_like(v.G), v.G], axis=1)]
        )
        assert C == LinearCode(GF5, expected)

    def test_rs_pair_over_gf3(self):
        C = mpc_code(MpcSpec([rs(GF3, 3, 2), rs(GF3, 3, 1)], vandermonde(GF3, 2, 2)))
        assert (C.n, C.k) == (6, 3)

    def test_single_row_identity(self):
        C1 = rs(GF7, 5, 3)
        assert mpc_code(MpcSpec([C1], from_rows(GF7, [[1]]))) == C1

    def test_block_major_coordinates(self):
        assert coordinate(4, 2, 3) == 11

    def test_shape_errors(self):
        with pytest.raises(ShapeMismatch):
            MpcSpec([rs(GF5, 4, 2), rs(GF5, 3, 2)], vandermonde(GF5, 2, 2))
        with pytest.raises(NotFullRank):
            MpcSpec([rs(GF5, 4, 2), rs(GF5, 4, 2)], from_rows(GF5, [[1, 2], [2, 4]]))


class TestMpcDistance:
    def test_nested_rs_over_gf3(self):
        spec = MpcSpec([rs(GF3, 3, 2), rs(GF3, 3, 2)], vandermonde(GF3, 2, 2))
        cert = mpc_distance(spec)
        assert cert.exact and cert.value == 2
        assert brute_force_distance(mpc_code(spec)) == 2

    def test_single_row(self):
        A = from_rows(GF5, [[1, 2, 3]])
        assert mpc_distance(MpcSpec([rs(GF5, 5, 2)], A)).value == 4 * 3

    def test_non_nested_is_lower_bound(self):
        spec = MpcSpec([rs(GF5, 4, 1), rs(GF5, 4, 3)], vandermonde(GF5, 2, 2))
        assert mpc_distance(spec).kind == LOWER


class TestSpecialMatrices:
    def test_vandermonde_is_printed_w(self):
        assert vandermonde(GF3, 3, 3) == FMatrix(GF3, embed(GF3, W_Q3))

    def test_vandermonde_too_wide(self):
        with pytest.raises(TooWide):
            vandermonde(GF3, 4, 2)

    def test_adot_q3_printed(self):
        A, wit = euclidean_selforth_matrix(GF3, 3, "full_q")
        assert A == FMatrix(GF3, embed(GF3, ADOT_Q3))
        assert gram(A) == FMatrix(GF3, embed(GF3, ADOT_GRAM_Q3))
        assert wit.permutation == (2, 1, 0)

    def test_roots_of_unity_variant_gf9(self):
        B, _ = euclidean_selforth_matrix(GF9, 4, "roots_of_Xh_minus_1")
        G = gram(B).entries
        one = GF9.from_int(1)
        for i in range(4):
            for j in range(4):
                expected = one if (i == j == 0) or (i + j == 4) else 0
                assert G[i, j] == expected

    def test_twisted_variant_gf9(self):
        B, wit = euclidean_selforth_matrix(GF9, 3, "roots_of_Xh_minus_X")
        assert is_nsc(B)
        G = gram(B).entries
        two = GF9.from_int(2)
        assert [G[i, 2 - i] for i in range(3)] == [two] * 3
        assert np.count_nonzero(G) == 3

    def test_preconditions(self):
        with pytest.raises(PreconditionFailed):
            euclidean_selforth_matrix(GF9, 3, "full_q")
        with pytest.raises(PreconditionFailed):
            euclidean_selforth_matrix(GF9, 3, "roots_of_Xh_minus_1")  # 3 does not divide 8
        with pytest.raises(PreconditionFailed):
            euclidean_selforth_matrix(GF7, 3, "roots_of_Xh_minus_X")  # 1 - 3 = 5 is not a square mod 7

    def test_hermitian_self_paired_rows_q3(self):
        _, sigma = hermitian_selforth_matrix(GF9)
        fixed = [i for i, j in enumerate(sigma) if i == j]
        assert fixed == self_paired_rows(3) == [2, 4, 6]  # 1-based {3, 5, 7}

    def test_hermitian_pairing_is_an_involution(self):
        for F in (GF9, GF25):
            _, sigma = hermitian_selforth_matrix(F)
            assert sorted(sigma) == list(range(F.q))
            assert all(sigma[sigma[i]] == i for i in range(F.q))

    def test_bsigma_gram_q3(self):
        B = hermitian_ordered_matrix(GF9, 9)
        G = gram(B, "hermitian").entries
        two = GF9.from_int(2)
        expected = np.zeros((9, 9), dtype=np.int64)
        for i in range(3):
            expected[i, i] = two
        for i in range(6):
            expected[3 + i, 8 - i] = two
        assert np.array_equal(G, expected)
        assert gram(B, "hermitian") @ gram(B, "hermitian") == FMatrix(GF9, np.diag([1] * 9))

    def test_bsigma_prefix(self):
        assert hermitian_ordered_matrix(GF9, 7) == FMatrix(GF9, hermitian_ordered_matrix(GF9, 9).entries[:7])

    @pytest.mark.parametrize("s", [5, 6])
    def test_bsigma_row_floor(self, s):
        with pytest.raises(RowCountOutOfRange):
            hermitian_ordered_matrix(GF9, s)


class TestDual:
    def test_square_case_uses_inverse_transpose(self):
        A = adot(GF5)
        Cs = [rs(GF5, 4, k) for k in (4, 3, 3, 2, 1)]
        spec = MpcSpec(Cs, A)
        assert mpc_dual(spec) == dual(mpc_code(spec))

    def test_full_constituents_give_zero_dual(self):
        spec = MpcSpec([full_space(GF5, 3)] * 3, vandermonde(GF5, 3, 3))
        assert mpc_dual(spec).k == 0

    def test_hermitian(self):
        A = hermitian_ordered_matrix(GF9, 7)
        Cs = [rs(GF9, 4, 3)] * 7
        spec = MpcSpec(Cs, A)
        assert mpc_dual(spec, "hermitian") == dual(mpc_code(spec, with_distance=False), "hermitian")


class TestZetaCriterion:
    def test_adot_with_nested_rs_passes(self):
        spec = MpcSpec([full_space(GF3, 3), rs(GF3, 3, 2), rs(GF3, 3, 2)], adot(GF3))
        rep = check_dual_containing(spec)
        assert rep.passed
        assert contains(mpc_code(spec), mpc_dual(spec))

    def test_repetition_constituents_fail_condition_four(self):
        spec = MpcSpec([rs(GF3, 3, 1)] * 3, adot(GF3))
        rep = check_dual_containing(spec)
        assert rep.failing_conditions == [4]
        assert (1, 1) in rep.violations[4]  # 1-based (2, 2)

    def test_monomial_gram_reduces_to_paired_condition(self):
        A = adot(GF5)
        wit = monomial_decompose(gram(A))
        assert wit is not None
        Cs = [rs(GF5, 5, k) for k in (5, 4, 3, 2, 1)]
        rep = check_dual_containing(MpcSpec(Cs, A))
        paired = all(contains(Cs[i], dual(Cs[4 - i])) for i in range(5))
        assert rep.passed == paired

    def test_rectangular_condition_one(self):
        spec = MpcSpec([rs(GF5, 4, 3)], from_rows(GF5, [[1, 1]]))
        rep = check_dual_containing(spec)
        assert not rep.passed
        assert rep.passed == contains(mpc_code(spec), mpc_dual(spec))


class TestDualDistanceBound:
    def test_square_q3(self):
        spec = MpcSpec([full_space(GF3, 3), rs(GF3, 3, 2), rs(GF3, 3, 2)], adot(GF3))
        # terms: inf, 2 * d(RS(3,1)) = 6, 3 * 3 = 9
        assert mpc_dual_distance_bound(spec) == 6
        assert min_distance(mpc_dual(spec)).value >= 6

    def test_capped_by_s_plus_one(self):
        # terms: s + 1 = 3, 1 * d(RS(5,1)) = 5, 2 * 5 = 10
        spec = MpcSpec([rs(GF5, 5, 4), rs(GF5, 5, 4)], vandermonde(GF5, 4, 2))
        assert mpc_dual_distance_bound(spec) == 3

    def test_full_constituents(self):
        spec = MpcSpec([full_space(GF5, 3)] * 2, vandermonde(GF5, 4, 2))
        assert mpc_dual_distance_bound(spec) == 3

    def test_requires_nsc(self):
        spec = MpcSpec([rs(GF5, 3, 1)] * 2, from_rows(GF5, [[1, 1, 0], [2, 2, 1]]))
        with pytest.raises(NotNsc):
            mpc_dual_distance_bound(spec)


class TestEnlarged:
    def test_gf5_single_extension(self):
        C1, C2 = rs(GF5, 4, 2), rs(GF5, 4, 1)
        code = ext_mpc_code(rs_enlarge(C1), C1, rs_enlarge(C2), C2, vandermonde(GF5, 2, 2), 1)
        assert (code.n, code.k) == (9, 3)
        bound = ext_distance_bound(3, 4, 2, 1)
        assert bound == 4
        assert brute_force_distance(code) >= bound

    def test_every_column_enlarged(self):
        C1, C2 = rs(GF7, 4, 3), rs(GF7, 4, 2)
        code = ext_mpc_code(rs_enlarge(C1), C1, rs_enlarge(C2), C2, vandermonde(GF7, 3, 2), 3)
        assert code.n == 4 * 3 + 3

    def test_not_nested(self):
        C1, C2 = rs(GF5, 4, 1), rs(GF5, 4, 2)
        with pytest.raises(NotNested):
            ext_mpc_code(rs_enlarge(C1), C1, rs_enlarge(C2), C2, vandermonde(GF5, 2, 2), 1)

    def test_not_an_enlargement(self):
        C1, C2 = rs(GF5, 4, 2), rs(GF5, 4, 1)
        pad = lambda C: LinearCode(GF5, np.concatenate([C.G, np.zeros((C.k, 1), dtype=np.int64)], axis=1))  # noqa: E731
        with pytest.raises(NotEnlargement):
            ext_mpc_code(pad(C1), C1, pad(C2), C2, vandermonde(GF5, 2, 2), 1)


def test_euclidean_gram_pattern_entrywise():
    for F in (GF3, GF5, GF9):
        G = gram(adot(F)).entries
        minus_one = F.neg(1)
        for i in range(F.q):
            for j in range(F.q):
                assert G[i, j] == (minus_one if i + j == F.q - 1 else 0)


def test_bsigma_order_is_a_permutation():
    _, sigma = hermitian_selforth_matrix(GF25)
    assert sorted(bsigma_order(sigma)) == list(range(25))


@given(st.integers(0, 2**32 - 1), st.sampled_from(["euclidean", "hermitian"]))
@settings(max_examples=80, deadline=None)
def test_dual_formula_matches_nullspace(seed, kind):
    spec = random_spec(np.random.default_rng(seed), kind)
    assert mpc_dual(spec, kind) == dual(mpc_code(spec, with_distance=False), kind)


@given(st.integers(0, 2**32 - 1), st.sampled_from(["euclidean", "hermitian"]))
@settings(max_examples=80, deadline=None)
def test_zeta_verdict_matches_direct_containment(seed, kind):
    spec = random_spec(np.random.default_rng(seed), kind)
    direct = contains(mpc_code(spec, with_distance=False), mpc_dual(spec, kind))
    assert check_dual_containing(spec, kind).passed == direct


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_slices_lie_in_the_row_space_of_a(seed):
    rng = np.random.default_rng(seed)
    spec = random_spec(rng, "euclidean", max_m=3, max_h=3)
    F = spec.field
    G = mpc_code(spec, with_distance=False)
    if G.k == 0:
        return
    msgs = rng.integers(0, F.q, (10, G.k))
    words = G.encode(msgs)
    A = spec.A.entries
    for p in words:
        for l in range(spec.m):
            slice_ = p[[coordinate(spec.m, j, l) for j in range(spec.h)]]
            assert _rank(F, np.vstack([A, slice_])) == _rank(F, A)


@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 5]))
@settings(max_examples=40, deadline=None)
def test_nested_distance_matches_brute_force(seed, q):
    rng = np.random.default_rng(seed)
    F = GF3 if q == 3 else GF5
    h = int(rng.integers(1, min(q, 3) + 1))
    m = int(rng.integers(1, min(q, 12 // h) + 1))
    s = int(rng.integers(1, h + 1))
    ks = sorted(rng.integers(1, m + 1, s).tolist(), reverse=True)
    spec = MpcSpec([rs(F, m, k) for k in ks], vandermonde(F, h, s))
    if sum(ks) > 8:
        return
    cert = mpc_distance(spec)
    assert cert.exact
    assert brute_force_distance(mpc_code(spec)) == cert.value


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(0, 3))
@settings(max_examples=40, deadline=None)
def test_dual_matrix_completion_prefix(seed, s, extra):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, 5, (s, s + extra))
    if _rank(GF5, A) < s:
        return
    B = complete_to_invertible(FMatrix(GF5, A))
    assert np.array_equal(B.entries[:s], A)
