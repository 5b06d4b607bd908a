import math

import numpy as np
import pytest


def sieve(limit):
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for k in range(2, math.isqrt(limit) + 1):
        if flags[k]:
            flags[k * k :: k] = False
    return flags


@pytest.fixture(scope="session")
def prime_flags():
    return sieve(10**6)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
