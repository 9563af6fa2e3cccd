"""The ten acceptance criteria, run exactly; one PASS/FAIL line each."""

import pytest

from gentwist.acceptance import CRITERIA, AcceptanceConfig, run_criterion

CFG = AcceptanceConfig()


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, capsys):
    result = run_criterion(number, CFG)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.detail
