import pytest

from hilbtaut.verify import LIMITS, NAMES, SUITES, CheckResult, run_check, run_suite, suite_numbers


def test_suite_parsing():
    assert suite_numbers("all") == tuple(range(1, 11))
    assert suite_numbers("specseq") == (6, 7)
    assert suite_numbers("grading,3,grading") == (9, 3)
    with pytest.raises(ValueError):
        suite_numbers("nothing")
    with pytest.raises(ValueError):
        suite_numbers("11")


def test_every_module_suite_is_known():
    assert sorted(x for nums in SUITES.values() for x in nums) == list(range(1, 11))
    assert set(NAMES) == set(LIMITS) == set(range(1, 11))


def test_result_line_format():
    r = CheckResult(4, NAMES[4], True, "ok", 1.234)
    assert r.line().startswith("[PASS]  4 ")
    assert r.line().endswith("(1.23s, limit 60s)")
    assert r.within_limit
    assert not CheckResult(10, NAMES[10], True, "ok", 2.0).within_limit


def test_fast_tier_passes():
    results = run_suite("all", tier="fast", max_n=3)
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_unknown_tier():
    with pytest.raises(ValueError):
        run_check(1, tier="slow")
