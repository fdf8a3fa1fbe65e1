import json

import pytest

from em_lab.errors import ParameterError
from em_lab.identities import (LITERAL_FORMS, UnknownIdentity, VerifyReport, get_record, registry,
                               verify, verify_all)
from em_lab.qpoly import Poly, q_analogue

STRATEGIES = {"poly_equal", "x_series", "zx_series", "zxy_qp_series"}


@pytest.fixture(scope="module")
def full_run():
    return verify_all(workers=1)


class TestRegistry:
    def test_size_and_membership(self):
        ids = [r.id for r in registry()]
        assert len(ids) >= 35 and len(set(ids)) == len(ids)
        assert "carlitz" in ids

    @pytest.mark.parametrize("rec", registry(), ids=lambda r: r.id)
    def test_record_well_formed(self, rec):
        assert rec.strategy in STRATEGIES
        assert rec.summary
        for params in rec.default_grid:
            rec.validate(params)

    @pytest.mark.parametrize("id_", LITERAL_FORMS)
    def test_literal_forms_have_corrected_partner(self, id_):
        rec = get_record(id_)
        assert rec.note
        partner = rec.note.split("see ")[1].split()[0]
        assert get_record(partner).id == partner

    def test_unknown(self):
        with pytest.raises(UnknownIdentity):
            get_record("nonsense")
        with pytest.raises(KeyError):
            verify("nonsense")


class TestVerify:
    def test_carlitz(self):
        rep = verify("carlitz", n=2, M=3)
        assert rep.passed and rep.truncations == {"M": 3}
        # coefficient of x^1: (1 + q)^2
        q = Poly.monomial(("q", "x"), q=1)
        assert rep.lhs.coefficient("x", 1).embed(("q", "x")) == (1 + q) ** 2

    def test_derangement_count(self):
        rep = verify("derangement_count", n=2, r=2)
        assert rep.passed and rep.lhs.constant_term() == rep.rhs.constant_term() == 5

    def test_fmaj_dist(self):
        rep = verify("fmaj_dist", n=1, r=3)
        q = Poly.monomial(("q",), q=1)
        assert rep.passed and rep.lhs == rep.rhs == q_analogue(3, q)

    @pytest.mark.parametrize("kw", [dict(n=99), dict(n=-1), dict(n=2, r=1), dict()])
    def test_bad_params(self, kw):
        with pytest.raises(ParameterError):
            verify("carlitz", **kw)

    def test_bad_truncation(self):
        with pytest.raises(ParameterError):
            verify("carlitz", n=2, cap=3)

    def test_failure_reports_mismatch(self):
        rep = verify("ldes_lmaj", n=1, r=2)
        assert not rep.passed
        assert rep.mismatch is not None and rep.mismatch.lhs != rep.mismatch.rhs
        obj = rep.to_json_obj()
        assert obj["pass"] is False and set(obj["mismatch"]) >= {"lhs", "rhs"}

    def test_json_schema(self):
        obj = verify("carlitz", n=2, M=3).to_json_obj()
        assert obj == {"id": "carlitz", "params": {"n": 2}, "truncations": {"M": 3}, "pass": True}
        back = VerifyReport.from_json_obj(json.loads(json.dumps(obj)))
        assert back.to_json_obj() == obj


class TestVerifyAll:
    def test_only_literal_forms_fail(self, full_run):
        failing = {rep.id for rep in full_run if not rep.passed}
        assert failing == set(LITERAL_FORMS)
        assert all(rep.error is None for rep in full_run)

    @pytest.mark.parametrize("id_", LITERAL_FORMS)
    def test_corrected_forms_pass(self, full_run, id_):
        partner = get_record(id_).note.split("see ")[1].split()[0]
        reps = [r for r in full_run if r.id == partner]
        assert reps and all(r.passed for r in reps)

    def test_sorted_and_json_round_trip(self, full_run):
        assert full_run == sorted(full_run, key=VerifyReport.sort_key)
        for rep in full_run:
            obj = rep.to_json_obj()
            assert VerifyReport.from_json_obj(obj).to_json_obj() == obj

    def test_empty_override(self):
        assert verify_all([], workers=1) == []

    def test_out_of_range_override(self):
        reps = verify_all([{"id": "carlitz", "params": {"n": 99}}, {"id": "nonsense", "params": {}}],
                          workers=1)
        assert [r.passed for r in reps] == [False, False]
        assert all(r.error for r in reps)

    def test_worker_count_does_not_change_output(self):
        grid = [{"id": i, "params": p} for i, p in [("fmaj_dist", {"n": 3, "r": 2}), ("carlitz", {"n": 3}),
                                                      ("ldes_lmaj", {"n": 2, "r": 2}),
                                                      ("derangement_count", {"n": 4, "r": 3}),
                                                      ("colored_df", {"r": 2})]]
        one = [r.to_json_obj() for r in verify_all(grid, workers=1)]
        two = [r.to_json_obj() for r in verify_all(list(reversed(grid)), workers=2)]
        assert one == two
