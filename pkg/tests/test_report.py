import json
from fractions import Fraction as F

from hungryqd.exact.laurent import LaurentMatrix, LaurentPoly
from hungryqd.report import ResidualReport, SuiteReport, residual_is_zero


def test_exact_zero_is_structural():
    assert residual_is_zero(F(0))
    assert not residual_is_zero(F(1, 10**40))
    assert residual_is_zero([F(0), {"a": F(0)}])
    assert residual_is_zero(LaurentMatrix.zeros(2, 2))
    assert not residual_is_zero(LaurentMatrix([[LaurentPoly({1: F(1, 3)})]]))


def test_float_zero_uses_tolerance():
    assert residual_is_zero(1e-12)
    assert not residual_is_zero(1e-3)
    assert residual_is_zero(1e-3, tol=1e-2)


def test_failure_serialized_as_rational_string():
    rep = ResidualReport("R19", m=2)
    rep.record((3, 4), F(-5, 7))
    js = rep.to_json()
    assert js == {"relation": "R19", "m": 2, "sites_checked": 1, "sites_skipped": 0,
                  "failures": [{"k": 3, "l": 4, "residual": "-5/7"}]}


def test_exit_codes():
    ok = ResidualReport("a", m=1)
    ok.record((0, 0), 0)
    bad = ResidualReport("b", m=1)
    bad.record((0, 0), 1)
    empty = ResidualReport("c", m=1)
    empty.skip((0, 0))
    assert SuiteReport({}, [ok]).exit_code() == 0
    assert SuiteReport({}, [ok, bad]).exit_code() == 1
    assert SuiteReport({}, [empty]).exit_code() == 2
    assert SuiteReport({}, []).exit_code() == 2


def test_suite_order_is_by_name_then_m():
    reps = [ResidualReport("z", m=1), ResidualReport("a", m=3), ResidualReport("a", m=1)]
    js = json.loads(SuiteReport({"seed": 1}, reps).dumps(with_time=False))
    assert [(r["relation"], r["m"]) for r in js["reports"]] == [("a", 1), ("a", 3), ("z", 1)]
    assert "wall_time" not in js


def test_merge_accumulates():
    a, b = ResidualReport("x", m=1), ResidualReport("x", m=1)
    a.record((0, 0), 0)
    b.record((1, 0), 2)
    b.skip((2, 0))
    b.values["h"] = [F(1)]
    a.merge(b)
    assert (a.checked, a.skipped, len(a.failures), a.values["h"]) == (2, 1, 1, [F(1)])
