"""Acceptance criteria 1 to 10 at full size, each within its time limit."""

import pytest

from hilbtaut.verify import CHECKS, LIMITS, run_check

ACCEPTANCE_LINES: list[str] = []


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    result = run_check(number, tier="full")
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, line
    assert result.within_limit, f"took {result.seconds:.1f}s, limit {LIMITS[number]}s"
