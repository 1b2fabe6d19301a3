import itertools
import os
import random

import pytest
from hypothesis import HealthCheck, settings

from poscert.poly import UniPoly
from poscert.sat import CnfFormula

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def exhaustive_corpus():
    """Every nonzero integer polynomial of degree <= 4 with coefficients in [-3, 3]."""
    return [UniPoly(c) for c in itertools.product(range(-3, 4), repeat=5) if any(c)]


def random_corpus(count=1000, seed=20240611, max_degree=6, bound=10):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_degree)
        cs = [rng.randint(-bound, bound) for _ in range(n + 1)]
        if cs[-1] == 0:
            continue
        out.append(UniPoly(cs))
    return out


def full_unsat_formula():
    """All 8 sign patterns on x1, x2, x3: every assignment falsifies one clause."""
    return CnfFormula.from_ints(3, [[a, 2 * b, 3 * c] for a, b, c in itertools.product((1, -1), repeat=3)])


def random_formulas(count=500, seed=7, u=3, max_clauses=5):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.randint(1, max_clauses)
        clauses = []
        for _ in range(m):
            vs = rng.sample(range(1, u + 1), 3)
            clauses.append([v if rng.random() < 0.5 else -v for v in vs])
        out.append(CnfFormula.from_ints(u, clauses))
    return out


@pytest.fixture(scope="session")
def corpus():
    return exhaustive_corpus()


@pytest.fixture(scope="session")
def unsat8():
    return full_unsat_formula()


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = {}


def report_criterion(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
