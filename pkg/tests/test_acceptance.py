"""The twelve acceptance criteria at their fixed tolerances.

Each test prints its pass/fail line; the lines are also collected into a
terminal summary section so they appear without ``-s``.
"""

import pytest

from robin_spectra.acceptance import CRITERIA

SLOW = {1, 6, 7, 10, 11}


@pytest.mark.parametrize(
    "number",
    [pytest.param(i, marks=pytest.mark.slow) if i in SLOW else i for i in range(1, 13)],
    ids=[f"criterion_{i}" for i in range(1, 13)],
)
def test_criterion(number, acceptance_log):
    result = CRITERIA[number - 1]()
    line = result.line()
    print(line)
    acceptance_log.append((number, line))
    assert result.number == number
    assert result.passed, f"{line}\n{result.details}"
