import numpy as np
import pytest

from qnfl.verify import SUITE_NAMES, CheckResult, _Accumulator, run_suite


def test_check_line_format():
    check = CheckResult(name="demo", passed=True, observed=0.5, expected=0.52, band=0.03)
    assert check.line() == "[PASS] demo: observed=0.5 expected=0.52 band=0.03"
    failed = CheckResult(name="demo", passed=False, observed=1.0, expected=0.0, band=0.1, detail="why")
    assert failed.line().startswith("[FAIL] demo:")
    assert failed.line().endswith("(why)")


def test_accumulator_matches_numpy():
    acc = _Accumulator()
    chunks = [np.array([1.0, 2.0, 3.0]), np.array([4.0, 5.0])]
    for chunk in chunks:
        acc.add(chunk)
    flat = np.concatenate(chunks)
    assert acc.mean == pytest.approx(flat.mean())
    assert acc.se == pytest.approx(flat.std(ddof=1) / np.sqrt(flat.size))


def test_run_suite_rejects_unknown_name():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("bogus", 100, 0)


def test_run_suite_deterministic():
    a = run_suite("risk", 5000, seed=3)
    b = run_suite("risk", 5000, seed=3)
    assert a == b
    c = run_suite("risk", 5000, seed=4)
    assert [chk.observed for chk in a] != [chk.observed for chk in c]


def test_all_concatenates_every_suite():
    per_suite = {name: run_suite(name, 2000, 0) for name in SUITE_NAMES}
    combined = run_suite("all", 2000, 0)
    assert combined == [chk for name in SUITE_NAMES for chk in per_suite[name]]


def test_sound_suites_pass_at_moderate_samples():
    for name in ("risk", "packing", "concentration"):
        assert all(chk.passed for chk in run_suite(name, 20_000, 0)), name


def test_formula_discrepancies_are_reported_not_hidden():
    variance = run_suite("variance", 50_000, 0)
    published_fail = [chk for chk in variance if "published" in chk.name and not chk.passed]
    assert published_fail, "published-form checks should fail at r >= 2"
    assert all("published" in chk.name or chk.passed for chk in variance)
    assert all(chk.detail for chk in published_fail)
    # r = 1 is the one case where the published form is right
    r1 = [chk for chk in variance if "r=1" in chk.name and "published" in chk.name]
    assert r1 and all(chk.passed for chk in r1)

    meangap = run_suite("meangap", 50_000, 0)
    assert any("published" in chk.name and not chk.passed for chk in meangap)
    assert all(chk.passed for chk in meangap if "exact" in chk.name)
