import json

import pytest

from acceptance import (
    FAIL,
    LEVELS,
    PASS,
    CheckResult,
    check_barcobar,
    check_brackets,
    check_cells,
    check_determinism,
    check_full_hoch,
    check_koszul,
    check_polydiff_hoch,
    report_json,
    run_suite,
    save_report,
)
from complexes.hoch import StabilityRow

QUICK = LEVELS["quick"]


@pytest.mark.parametrize(
    "check", [check_cells, check_koszul, check_barcobar, check_polydiff_hoch, check_determinism],
)
def test_quick_checks_pass(check):
    res = check(QUICK)
    assert res.status == PASS, res.details


def test_quick_brackets_pass():
    res = check_brackets(QUICK)
    assert res.passed, res.details


def test_unstable_never_masks_a_failure():
    res = CheckResult(6, "demo")
    res.fail("broken")
    res.unstable("top arity")
    assert res.status == FAIL
    assert not res.passed


def test_report_has_no_timings(tmp_path):
    results = [CheckResult(1, "a", seconds=1.5), CheckResult(2, "b", seconds=0.2)]
    results[1].unstable("arity 4 feels the window")
    text = report_json(results, "quick")
    data = json.loads(text)
    assert data["passed"] is True
    assert "seconds" not in text
    assert data["checks"][1]["status"] == "not-yet-stable"
    path = save_report(results, "quick", str(tmp_path))
    with open(path) as fh:
        assert fh.read() == text


def test_unknown_level():
    with pytest.raises(ValueError):
        run_suite("huge")


@pytest.mark.slow
def test_quick_suite_passes():
    results = run_suite("quick", jobs=1)
    assert [r.criterion for r in results] == list(range(1, 10))
    assert all(r.passed for r in results), [(r.name, r.details) for r in results if not r.passed]


def test_quick_full_hoch_passes():
    assert check_full_hoch(QUICK).passed


def test_full_hoch_compares_against_polydiff_betti(monkeypatch):
    import acceptance

    # stable row whose closed form agrees but whose polydifferential count does not
    rows = [StabilityRow(1, 1, 1, 1, 2)]
    monkeypatch.setattr(acceptance, "truncation_stability", lambda *a, **k: rows)
    res = check_full_hoch(QUICK)
    assert res.status == FAIL
    assert any("polydifferential" in d for d in res.details)


def test_errored_check_becomes_a_failure():
    import acceptance

    def check_bad(scale):
        raise ZeroDivisionError("rank")

    res = acceptance._timed((check_bad, QUICK))
    assert res.status == FAIL
    assert res.name == "bad"
    assert res.details == ["ZeroDivisionError: rank"]
