import sys
import numpy as np
import pytest
from hypothesis import strategies as st

from doomsday_sim.cnf import CnfFormula, random_cnf


def truth_table(formula: CnfFormula) -> np.ndarray:
    """f over all 2^n assignments by vectorized clause evaluation; row i is the integer i, MSB = x1."""
    n = formula.num_vars
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1
    sat = np.ones(1 << n, dtype=bool)
    for clause in formula.clauses:
        c = np.zeros(1 << n, dtype=bool)
        for lit in clause:
            col = bits[:, abs(lit) - 1].astype(bool)
            c |= col if lit > 0 else ~col
        sat &= c
    return sat.astype(int)


@st.composite
def formulas(draw, max_vars=6, max_clauses=8, max_width=4, allow_empty=True):
    n = draw(st.integers(1, max_vars))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    min_width = 0 if allow_empty else 1
    clauses = draw(st.lists(st.lists(lit, min_size=min_width, max_size=max_width), max_size=max_clauses))
    return CnfFormula.from_lists(n, clauses)


def corpus(count=50, max_n=8, max_m=20, seed=2026):
    """Deterministic mix of random k-CNF formulas, n <= 8, m <= 20."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        m = int(rng.integers(0, max_m + 1))
        k = int(rng.integers(1, 4))
        out.append(random_cnf(n, m, k=k, rng=rng, distinct=bool(rng.integers(0, 2))))
    return out


EXAMPLE = CnfFormula.from_lists(2, [[1, -2], [-1, 2]])


@pytest.fixture
def example():
    return EXAMPLE


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
