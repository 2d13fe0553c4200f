"""Every acceptance criterion at its stated tolerance, one pass/fail line each."""
import pytest

from perdist.acceptance import CRITERIA, TIME_LIMITS, run_criterion

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]}-{c[2].__name__}" for c in CRITERIA])
def test_criterion(number):
    res = run_criterion(number, seed=0)
    ACCEPTANCE_LINES.append(res.line())
    print(res.line())
    if number in TIME_LIMITS:
        assert res.seconds <= TIME_LIMITS[number]
    assert res.passed, res.detail
