import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy.stats import chisquare

from doomsday_sim.cnf import CnfFormula, brute_force_solutions, evaluate, random_cnf
from doomsday_sim.doomsday import AllObserversDead, postselect_alive
from doomsday_sim.pipeline import (RunConfig, alive_probability, measure_solution, monte_carlo, run_doomsday,
                                   runs_until_alive, slice_states)
from doomsday_sim.quantum import PureState, project

from conftest import formulas

UNIQUE = CnfFormula.from_lists(2, [[1], [2]])
UNSAT = CnfFormula.from_lists(1, [[1], [-1]])


def test_slices_example(example):
    s = slice_states(RunConfig(example))
    a = s.sigma_a.amplitudes
    np.testing.assert_array_equal(a[0::2], [0.5] * 4)
    assert not a[1::2].any()
    assert project(s.sigma_b, 2, 1)[1] == 0.5
    assert s.norms == pytest.approx((1, 1, 1), abs=1e-12)


def test_slices_unsat():
    s = slice_states(RunConfig(UNSAT))
    assert s.sigma_c.branch("alive").weight == 0


def test_run_unique():
    rep = run_doomsday(RunConfig(UNIQUE, seed=123))
    assert str(rep.solution) == "11"
    assert rep.p_alive == pytest.approx(0.25, abs=1e-12)
    assert rep.verified == 1 and rep.gate_total == 9


def test_run_example(example):
    rep = run_doomsday(RunConfig(example, seed=7))
    assert str(rep.solution) in {"00", "11"}
    assert rep.p_alive == pytest.approx(0.5, abs=1e-12)


def test_run_unsat():
    with pytest.raises(AllObserversDead):
        run_doomsday(RunConfig(UNSAT))


def test_run_wrong_mode(example):
    with pytest.raises(ValueError):
        run_doomsday(RunConfig(example, mode="montecarlo"))
    with pytest.raises(ValueError):
        monte_carlo(RunConfig(example))


@settings(max_examples=40, deadline=None)
@given(formulas(max_vars=7, max_clauses=8))
def test_emitted_solution_always_verifies(f):
    sols = brute_force_solutions(f)
    if not sols:
        return
    rep = run_doomsday(RunConfig(f, seed=f.num_vars))
    assert evaluate(f, rep.solution) == 1
    assert abs(rep.p_alive - len(sols) / 2**f.num_vars) <= 1e-12


def test_measure_unique():
    alive = PureState.basis("0111")
    for seed in range(20):
        assert str(measure_solution(alive, np.random.default_rng(seed))) == "011"


def test_measure_two_solutions_frequency(example):
    alive, _ = postselect_alive(slice_states(RunConfig(example)).sigma_c)
    rng = np.random.default_rng(2024)
    draws = [str(measure_solution(alive, rng)) for _ in range(10_000)]
    freq = draws.count("00") / len(draws)
    assert 0.47 <= freq <= 0.53
    assert set(draws) == {"00", "11"}


def test_measure_deterministic(example):
    alive, _ = postselect_alive(slice_states(RunConfig(example)).sigma_c)
    a = measure_solution(alive, np.random.default_rng(42))
    b = measure_solution(alive, np.random.default_rng(42))
    assert a == b


def test_measure_zero_state():
    with pytest.raises(ValueError):
        measure_solution(PureState(2, np.zeros(4)), np.random.default_rng(0))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_solution_distribution_uniform(seed):
    rng = np.random.default_rng(seed)
    while True:
        f = random_cnf(5, 12, rng=rng)
        sols = brute_force_solutions(f)
        if 2 <= len(sols) <= 8:
            break
    alive, _ = postselect_alive(slice_states(RunConfig(f)).sigma_c)
    draw_rng = np.random.default_rng(seed + 100)
    counts = {str(s): 0 for s in sols}
    for _ in range(10_000):
        counts[str(measure_solution(alive, draw_rng))] += 1
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_run_seed_sweep_covers_solutions(example):
    seen = {str(run_doomsday(RunConfig(example, seed=s)).solution) for s in range(40)}
    assert seen == {"00", "11"}


def test_runs_until_alive_edges():
    rng = np.random.default_rng(0)
    assert runs_until_alive(1.0, 5, rng) == 1
    assert runs_until_alive(0.0, 200, rng) is None


def test_monte_carlo_tautology():
    rep = monte_carlo(RunConfig(CnfFormula.from_lists(3, []), mode="montecarlo", trials=500))
    assert rep.dead_branch_total == 0 and rep.survived_trials == 500
    assert rep.mean_runs_to_survival == 1.0 and rep.expected_runs == 1.0


def test_monte_carlo_geometric():
    f = CnfFormula.from_lists(4, [[1], [-2], [3], [4]])
    rep = monte_carlo(RunConfig(f, mode="montecarlo", trials=10_000, seed=5, max_runs_per_trial=100_000))
    p = 1 / 16
    sigma = math.sqrt((1 - p) / p**2) / math.sqrt(10_000)
    assert rep.expected_runs == 16.0
    assert rep.censored_trials == 0
    assert abs(rep.mean_runs_to_survival - 16) <= 3 * sigma
    assert abs(rep.dead_branch_total / rep.trials - 15) <= 3 * sigma


def test_monte_carlo_unsat():
    rep = monte_carlo(RunConfig(UNSAT, mode="montecarlo", trials=50, max_runs_per_trial=100))
    assert rep.survived_trials == 0 and rep.censored_trials == 50
    assert rep.dead_branch_total == 100 * 50
    assert rep.mean_runs_to_survival is None and rep.expected_runs is None


def test_monte_carlo_censoring_accounting():
    f = CnfFormula.from_lists(6, [[1], [2], [3], [4], [5], [6]])
    rep = monte_carlo(RunConfig(f, mode="montecarlo", trials=300, max_runs_per_trial=20, seed=9))
    assert 0 < rep.censored_trials < 300
    assert rep.survived_trials + rep.censored_trials == 300
    assert rep.dead_branch_total >= 20 * rep.censored_trials
    assert rep.mean_runs_to_survival <= 20


def test_monte_carlo_deterministic(example):
    cfg = RunConfig(example, mode="montecarlo", trials=200, seed=77)
    assert monte_carlo(cfg) == monte_carlo(cfg)
    assert monte_carlo(cfg) != monte_carlo(RunConfig(example, mode="montecarlo", trials=200, seed=78))


def test_monte_carlo_uses_quantum_mass(example):
    assert alive_probability(example) == 0.5


def test_run_config_validation(example):
    with pytest.raises(ValueError):
        RunConfig(example, mode="other")
    with pytest.raises(ValueError):
        RunConfig(example, trials=0)
    with pytest.raises(ValueError):
        RunConfig(example, seed=-1)
    with pytest.raises(ValueError):
        RunConfig(CnfFormula.from_lists(25, []))
    assert RunConfig(example).max_runs == 40
