import contextlib
import random
from fractions import Fraction

import pytest

from tropbn.core import default_chain, new_chain

ACCEPTANCE_RESULTS = {}


@contextlib.contextmanager
def criterion(number, title):
    """Record a PASS/FAIL line for an acceptance criterion, re-raising failures."""
    try:
        yield
    except BaseException:
        ACCEPTANCE_RESULTS[number] = (title, False)
        print(f"FAIL  criterion {number}: {title}")
        raise
    ACCEPTANCE_RESULTS[number] = (title, True)
    print(f"PASS  criterion {number}: {title}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, ok = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}")


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture
def chain2():
    """The g = 2 chain with ell = (3, 5), m = (1, 1) and one unit bridge."""
    return new_chain(2, [3, 5], [1, 1], [1])


@pytest.fixture(params=[1, 2, 3, 4, 5])
def default(request):
    return default_chain(request.param)


def F(x):
    return Fraction(x)
