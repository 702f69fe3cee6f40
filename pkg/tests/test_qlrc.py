from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpqlrc.code import full_space, rs
from mpqlrc.errors import (
    ClaimMismatch,
    ConstructionFailed,
    HypothesisFailed,
    InconsistentDimensions,
    InvalidRequest,
    LocalityUnverified,
    NonPositive,
    NotDualContaining,
    UnsupportedField,
)
from mpqlrc.gf import make_field
from mpqlrc.locality import custom_recovery, whole_support_sets
from mpqlrc.qlrc import (
    FAMILIES,
    FAMILY_PARAMS,
    FamilyRequest,
    build_family,
    family_id,
    qlrc_from_code,
    quantum_defect,
    reproduce_row,
    reproduce_table,
    table_rows,
    verify_artifact,
)

GF3, GF5 = make_field(3), make_field(5)


class TestQuantumDefect:
    @pytest.mark.parametrize(
        "args",
        [(25, 15, 2, 4, 2, 20), (81, 63, 2, 8, 2, 72), (9, 3, 2, 2, 2, 6), (3, 1, 2, 2, 2, 2)],
    )
    def test_optimal_parameters(self, args):
        assert quantum_defect(*args) == 0

    def test_inconsistent_dimensions(self):
        with pytest.raises(InconsistentDimensions):
            quantum_defect(25, 15, 2, 4, 2, 19)

    def test_non_positive_locality(self):
        with pytest.raises(NonPositive):
            quantum_defect(9, 3, 2, 0, 2, 6)


class TestFromCode:
    def test_full_space(self):
        C = full_space(GF3, 3)
        report = qlrc_from_code(C, "euclidean", custom_recovery(C, whole_support_sets(3), 3, 1))
        assert report.params == (3, 3, 1, 3, 1)
        assert math.isinf(report.delta_bound)
        assert report.quantum_defect == 0 and report.optimal
        assert report.to_dict()["delta_ok"]["bound"] == "unbounded"

    def test_not_dual_containing(self):
        C = rs(GF5, 4, 1)
        with pytest.raises(NotDualContaining):
            qlrc_from_code(C, "euclidean", custom_recovery(C, whole_support_sets(4), 1, 4))

    def test_unverified_locality(self):
        C = rs(GF5, 4, 3)
        S = custom_recovery(C, [(i, (i + 1) % 4) for i in range(4)], 1, 2)
        assert not S.verified
        with pytest.raises(LocalityUnverified):
            qlrc_from_code(C, "euclidean", S)


class TestOptimalFamilies:
    def test_el36_3_q5(self):
        res = build_family(FamilyRequest("El36_3", {"q": 5, "i": 1, "j": 1}))
        assert res.report.params == (25, 15, 2, 4, 2)
        assert res.report.optimal and res.report.q == 5

    def test_el36_4_q9(self):
        res = build_family(FamilyRequest("El36_4", {"q": 9, "h": 5, "i": 1, "j": 2}))
        assert res.report.params == (25, 13, 3, 4, 2)
        assert res.report.optimal

    def test_eel41_q9(self):
        res = build_family(FamilyRequest("EEl41", {"q": 9, "m": 8, "h": 3, "t": 1, "d": 2}))
        assert res.report.params == (24, 8, 2, 2, 2)
        assert res.report.optimal

    def test_euclidean_optimal_q3(self):
        res = build_family(FamilyRequest("EuclideanOptimal", {"q": 3, "t": 1, "d": 2}))
        assert res.report.params == (9, 3, 2, 2, 2)
        assert res.report.delta_bound == 3 - 1 + 1
        assert res.report.optimal

    @pytest.mark.parametrize("a,b,expected", [(0, 0, (81, 81, 1, 9, 1)), (1, 1, (81, 63, 2, 8, 2))])
    def test_el46_q3(self, a, b, expected):
        res = build_family(FamilyRequest("El46", {"q": 3, "a": a, "b": b}))
        assert res.kind == "hermitian"
        assert res.report.params == expected
        assert res.report.q == 3 and res.report.field_order == 9
        assert res.report.optimal


class TestGeneralFamilies:
    @pytest.mark.parametrize(
        "family,params,label",
        [
            ("MainEuclidean", {"q": 5, "m": 4, "h": 2, "k": [3, 3]}, "[[8, 4, 2]]_5 (3, 2)"),
            ("MainEuclidean", {"q": 9, "m": 4, "h": 3, "k": [3, 3, 3]}, "[[12, 6, 2]]_9 (3, 2)"),
            ("MainEuclidean2", {"q": 9, "m": 5, "h": 4, "k": [4, 4, 3, 3]}, "[[20, 8, 3]]_9 (4, 2)"),
            ("MainHermitian", {"q": 3, "a": 0, "k": [9] * 4 + [8] * 5}, "[[81, 71, 2]]_3 (9, 1)"),
            ("Enlarged", {"q": 9, "m": 4, "h": 2, "s": 1, "k": [3, 3]}, "[[9, 3, 2]]_9 (3, 1)"),
        ],
    )
    def test_instances(self, family, params, label):
        res = build_family({"family": family, "params": params})
        assert res.report.label == label
        assert res.report.locality_verified

    def test_failing_square_hypothesis_is_named(self):
        with pytest.raises(HypothesisFailed, match="1-h is a square"):
            build_family(FamilyRequest("MainEuclidean2", {"q": 5, "m": 4, "h": 4, "k": [3, 3, 3, 3]}))

    def test_range_hypothesis(self):
        with pytest.raises(HypothesisFailed, match="t < q/2"):
            build_family(FamilyRequest("EuclideanOptimal", {"q": 5, "t": 3, "d": 4}))

    def test_even_characteristic(self):
        with pytest.raises(HypothesisFailed, match="odd prime"):
            build_family(FamilyRequest("El36_3", {"q": 8, "i": 1, "j": 1}))

    def test_claim_mismatch_when_d_exceeds_h_minus_t_plus_1(self):
        # d > h - t + 1 leaves a parity constituent among the first t rows
        with pytest.raises(ClaimMismatch, match="zeta condition"):
            build_family(FamilyRequest("EEl41", {"q": 9, "m": 4, "h": 3, "t": 1, "d": 4}))


class TestRequests:
    @pytest.mark.parametrize("alias", ["el36_3", "EL36-3", "el363"])
    def test_aliases(self, alias):
        assert family_id(alias) == "El36_3"

    def test_unknown_family(self):
        with pytest.raises(InvalidRequest):
            FamilyRequest("Nope", {})

    def test_missing_parameter(self):
        with pytest.raises(InvalidRequest, match="needs"):
            FamilyRequest("El46", {"q": 3, "a": 1})

    def test_extra_parameter(self):
        with pytest.raises(InvalidRequest):
            FamilyRequest("El46", {"q": 3, "a": 1, "b": 1, "h": 2})

    def test_round_trip(self):
        req = FamilyRequest("MainEuclidean", {"q": 5, "m": 4, "h": 2, "k": [3, 3]})
        assert FamilyRequest.from_dict(req.to_dict()) == req
        assert req.label == "MainEuclidean(q=5, m=4, h=2, k=3,3)"


class TestArtifacts:
    @pytest.mark.parametrize(
        "family,params",
        [
            ("El36_3", {"q": 5, "i": 1, "j": 1}),
            ("EEl41", {"q": 9, "m": 8, "h": 3, "t": 1, "d": 2}),
            ("El46", {"q": 3, "a": 1, "b": 1}),
            ("Enlarged", {"q": 9, "m": 4, "h": 2, "s": 1, "k": [3, 3]}),
        ],
    )
    def test_round_trip_verifies(self, family, params):
        art = json.loads(json.dumps(build_family(FamilyRequest(family, params)).to_dict()))
        out = verify_artifact(art)
        assert out["passed"], out
        assert out["report"]["k_Q"] == art["report"]["k_Q"]

    def test_tampered_claim_fails(self):
        art = build_family(FamilyRequest("El36_3", {"q": 5, "i": 1, "j": 1})).to_dict()
        art["claim"]["d"] = 3
        out = verify_artifact(art)
        assert not out["passed"]
        assert not out["checks"]["parameters match claim"]

    def test_tampered_constituent_fails(self):
        art = build_family(FamilyRequest("El36_3", {"q": 5, "i": 1, "j": 1})).to_dict()
        spec = art["construction"]["spec"]
        spec["constituents"] = [rs(GF5, 5, 1).to_dict()] * len(spec["constituents"])
        out = verify_artifact(art)
        assert not out["passed"]
        assert out["checks"]["dual containment"] is False


class TestTable:
    def test_q9_row_count(self):
        rows = table_rows(9)
        assert len(rows) == 111
        assert rows[0][:5] == (3, 1, 2, 2, 2)
        assert rows[-1] == rows[-20]  # the last El46 entry repeats the first

    def test_first_row(self):
        row = reproduce_row(9, table_rows(9)[0])
        assert row.reproduced and row.built_from.startswith("EEl41")
        assert row.quantum_defect == 0

    def test_typo_row_has_negative_defect(self):
        row = next(r for r in table_rows(9) if r[:3] == (81, 40, 6))
        out = reproduce_row(9, row)
        assert not out.reproduced and out.quantum_defect == -1

    def test_length_81_rows(self):
        rows = reproduce_table(9, max_length=81)
        long = [r for r in rows if r.n == 81]
        assert len(long) == 17
        failed = {(r.n, r.k, r.d) for r in long if not r.reproduced}
        assert failed == {(81, 1, 9), (81, 3, 8), (81, 5, 7), (81, 19, 8), (81, 40, 6)}

    def test_el46_row_at_parameter_level(self):
        row = next(r for r in table_rows(9) if r[:3] == (6561, 6399, 2))
        out = reproduce_row(9, row)
        assert out.reproduced and out.level == "parameter"

    def test_generated_rows_for_q3(self):
        rows = reproduce_table(3)
        assert rows and all(r.quantum_defect >= 0 for r in rows)

    def test_unsupported_field(self):
        with pytest.raises(UnsupportedField):
            table_rows(4)


@given(st.sampled_from(FAMILIES), st.data())
@settings(max_examples=60, deadline=None)
def test_report_invariants(family, data):
    hermitian = family in ("MainHermitian", "El46")
    q = data.draw(st.sampled_from([3] if hermitian else [3, 5, 7, 9]))
    params = {"q": q}
    for key in ("m", "h", "i", "j", "t", "d", "a", "b", "s"):
        params[key] = data.draw(st.integers(0, q))
    h = params["h"] if family != "MainHermitian" else q * q
    top = params["m"] if family != "MainHermitian" else q * q - params["a"]
    count = 2 if family == "Enlarged" else max(h, 1)
    params["k"] = sorted(data.draw(st.lists(st.integers(1, max(top, 1)), min_size=count, max_size=count)), reverse=True)
    req = FamilyRequest(family, {key: params[key] for key in FAMILY_PARAMS[family]})
    try:
        res = build_family(req, budget=10**5)
    except (HypothesisFailed, ClaimMismatch, ConstructionFailed):
        return
    rep = res.report
    assert rep.k_Q == 2 * rep.k - rep.n
    assert rep.quantum_defect >= 0
    assert rep.delta <= rep.delta_bound
    if rep.optimal:
        assert rep.distance.exact and rep.locality_verified
    if rep.classical_defect == 0:
        assert rep.quantum_defect == 0
