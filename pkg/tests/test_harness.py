import csv
import io
import json

import pytest

from ballvol.harness import (FAIL, HOLD, UNDEFINED, decay_order, discrepancy_audit,
                             monotonicity_check, sharpness_compare, verify_case)


def test_and_kr_holds_everywhere():
    report = verify_case("CL_AND_KR", 1, 100)
    assert [r.n for r in report.records] == list(range(1, 101))
    assert all(r.status == HOLD for r in report.records)
    assert report.summary["first_certified_n"] == 1
    assert report.violations == []


def test_cd_left_side_from_twelve():
    report = verify_case("NEW_CD", 12, 200)
    assert all(r.lower.status == HOLD and r.upper.status == HOLD for r in report.records)


def test_cd_below_threshold_is_reported_not_asserted():
    report = verify_case("NEW_CD", 1, 30)
    assert report.violations == []
    below = report.summary["failures_below_claim"]
    assert below and all(f["n"] < 12 and f["side"] == "lower" for f in below)
    assert report.summary["first_certified_n_lower"] == 12


def test_o6_small_n_undefined():
    report = verify_case("NEW_O6", 1, 5)
    assert report.records[0].lower.status == UNDEFINED
    assert report.records[0].lower.bound is None
    assert report.summary["discrepancy"]["lower"]["undefined_n"] == [1, 2, 3, 4, 5]


def test_ab_printed_variant_discrepancy():
    report = verify_case("NEW_AB", 1, 40)
    assert report.violations == []
    assert report.audit_failures
    disc = report.summary["discrepancy"]["lower"]
    assert disc["alternate_variant"] == "closed"
    assert disc["alternate_first_certified_n_lower"] == 1
    closed = verify_case("NEW_AB:closed", 1, 40)
    assert "discrepancy" not in closed.summary


def test_margins_are_consistent_with_statuses():
    report = verify_case("NEW_PSI", 1, 60)
    for r in report.records:
        for side in (r.lower, r.upper):
            assert side.status == HOLD
            assert side.margin.lo > 0
            assert side.bound is not None


def test_determinism_and_parallel_merge():
    serial = verify_case("NEW_RS", 1, 40, chunk=7)
    again = verify_case("NEW_RS", 1, 40, chunk=40)
    parallel = verify_case("NEW_RS", 1, 40, workers=2, chunk=10)
    assert serial.to_json() == again.to_json() == parallel.to_json()


def test_json_and_csv_agree():
    report = verify_case("NEW_OO", 1, 20)
    obj = json.loads(report.to_json())
    assert set(obj) == {"case", "n_from", "n_to", "prec_bits", "records", "summary"}
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert list(rows[0]) == ["case", "n", "lower", "value", "upper", "margin_lo", "margin_hi", "status"]
    assert len(rows) == len(obj["records"]) == 20
    assert [r["status"] for r in rows] == [r["status"] for r in obj["records"]]
    assert any(r["status"] == FAIL for r in rows)


def test_bad_range_and_case():
    with pytest.raises(ValueError):
        verify_case("CL_AND_KR", 5, 4)
    with pytest.raises(KeyError):
        verify_case("NOT_A_CASE", 1, 2)


def test_monotonicity():
    res = monotonicity_check(1, 300)
    assert res["direct"]["holds"]
    assert res["sufficient_printed"]["first_certified_n"] is not None
    assert res["sufficient_closed"]["first_certified_n"] is not None


@pytest.mark.parametrize("series, trunc, expected", [
    ("MU", 5, 7), ("LAMBDA", 3, 4), ("C", 2, 3), ("D", 4, 5), ("B", 3, 8),
    ("PSI", 4, 5), ("S", 3, 4), ("T", 2, 3), ("MU", 7, 9), ("LAMBDA", 5, 6),
])
def test_decay_order(series, trunc, expected):
    res = decay_order(series, trunc, 100, 200)
    assert res["status"] == "certified"
    assert abs(res["order"] - expected) < 0.15


def test_decay_order_range_check():
    with pytest.raises(ValueError):
        decay_order("MU", 5, 100, 150)


def test_sharpness_examples():
    rows = sharpness_compare("NEW_RS", "CL_AND_KR", [10])
    assert rows[0]["status"] == "new_sharper"
    rows = sharpness_compare("NEW_O6", "CL_CHEN_SUM", [100])
    assert rows[0]["status"] == "new_sharper" and float(rows[0]["width_ratio"]) > 1
    rows = sharpness_compare("NEW_33", "CL_CHEN_OMEGA", [10])
    assert rows[0]["status"] == "new_sharper"


def test_sharpness_rejects_mismatched_quantities():
    with pytest.raises(ValueError):
        sharpness_compare("NEW_RS", "CL_CHEN_SUM", [10])
    with pytest.raises(ValueError):
        sharpness_compare("NEW_RS", "CL_MERKLE", [10])


def test_sharpness_undefined_rows():
    rows = sharpness_compare("NEW_O6", "CL_CHEN_SUM", [1])
    assert rows[0]["status"] == UNDEFINED


def test_discrepancy_audit_small_range():
    out = {d["case"]: d for d in discrepancy_audit(30)}
    assert set(out) == {"NEW_AB:printed", "NEW_O6"}
    assert out["NEW_O6"]["discrepancy"]["lower"]["first_defined_n"] == 10
