"""Acceptance criteria 1-11 at full sample sizes and tolerances.

Each test prints one ``[PASS]``/``[FAIL]`` line; run with ``pytest -v`` to
see them alongside the test results.
"""
import json

import pytest

from projcurv.verification import CRITERIA, run_criterion


@pytest.mark.acceptance
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = run_criterion(CRITERIA[number])
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, json.dumps(result.details, indent=1, default=str)[:4000]
