import math

import numpy as np
import pytest

from tensormodes.symtensor import from_terms

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f" :: {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def vsym(beta):
    """(x^2 + y^2)^2 + beta x^2 y^2."""
    return from_terms(2, 4, [((4, 0), 1), ((0, 4), 1), ((2, 2), 2 + beta)])


def vs(alpha, beta):
    """x^4 + alpha y^4 + 2 beta x^2 y^2."""
    return from_terms(2, 4, [((4, 0), 1), ((0, 4), alpha), ((2, 2), 2 * beta)])


@pytest.fixture
def vsym1():
    return vsym(1.0)


@pytest.fixture
def quad():
    return from_terms(2, 2, [((2, 0), 0.5), ((0, 2), 1.0)])


DIAG = np.array([1.0, 1.0]) / math.sqrt(2)
