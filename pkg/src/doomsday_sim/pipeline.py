"""End-to-end doomsday run: slices A, B, C, post-selection, readout, and branch sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .cnf import ENUMERATION_GUARD, Assignment, CnfFormula, evaluate
from .doomsday import ObserverRegister, anti_controlled_doomsday, postselect_alive
from .oracle import ReversibleCircuit, compile_oracle, gate_report
from .quantum import BranchedState, PureState, apply_oracle_compact, project, tensor, uniform_superposition

Mode = Literal["postselect", "montecarlo"]

# runs drawn per RNG call in the Monte Carlo loop; the sequence of uniforms is
# consumed in order, so this only affects speed
_MC_CHUNK = 64


@dataclass(frozen=True)
class RunConfig:
    formula: CnfFormula
    observer: ObserverRegister = field(default_factory=ObserverRegister)
    seed: int = 0
    mode: Mode = "postselect"
    trials: int = 1000
    max_runs_per_trial: int | None = None

    def __post_init__(self):
        if self.mode not in ("postselect", "montecarlo"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.formula.num_vars <= ENUMERATION_GUARD:
            raise ValueError(f"n={self.formula.num_vars} outside simulator range 1..{ENUMERATION_GUARD}")
        if self.max_runs_per_trial is not None and self.max_runs_per_trial < 1:
            raise ValueError("max_runs_per_trial must be >= 1")

    @property
    def max_runs(self) -> int:
        if self.max_runs_per_trial is None:
            return 10 * 2 ** self.formula.num_vars
        return self.max_runs_per_trial


@dataclass(frozen=True, eq=False)
class Slices:
    circuit: ReversibleCircuit
    sigma_a: PureState  # S x A; observer factor is config.observer.initial
    sigma_b: PureState  # S x A after U, scratch checked clean and dropped
    sigma_c: BranchedState

    @property
    def norms(self) -> tuple[float, float, float]:
        return self.sigma_a.norm, self.sigma_b.norm, math.sqrt(self.sigma_c.total_weight)


@dataclass(frozen=True)
class SolutionReport:
    solution: Assignment
    p_alive: float
    verified: int
    gate_total: int
    slice_norms: tuple[float, float, float]

    def to_dict(self) -> dict:
        return {
            "solution": str(self.solution),
            "p_alive": self.p_alive,
            "verified": self.verified,
            "gate_total": self.gate_total,
            "slice_norms": list(self.slice_norms),
        }


@dataclass(frozen=True)
class MonteCarloReport:
    trials: int
    mean_runs_to_survival: float | None
    dead_branch_total: int
    expected_runs: float | None
    survived_trials: int
    censored_trials: int
    p_alive: float

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "mean_runs_to_survival": self.mean_runs_to_survival,
            "dead_branch_total": self.dead_branch_total,
            "expected_runs": self.expected_runs,
            "survived_trials": self.survived_trials,
            "censored_trials": self.censored_trials,
            "p_alive": self.p_alive,
        }


def slice_states(config: RunConfig) -> Slices:
    formula = config.formula
    n = formula.num_vars
    circuit = compile_oracle(formula)
    sigma_a = tensor(uniform_superposition(n), PureState.basis(0, 1))
    sigma_b = apply_oracle_compact(circuit, sigma_a)
    sigma_c = anti_controlled_doomsday(sigma_b, config.observer)
    return Slices(circuit, sigma_a, sigma_b, sigma_c)


def alive_probability(formula: CnfFormula) -> float:
    """Weight of the ancilla-1 sector at slice B, read off the simulated state."""
    sigma_a = tensor(uniform_superposition(formula.num_vars), PureState.basis(0, 1))
    sigma_b = apply_oracle_compact(compile_oracle(formula), sigma_a)
    return min(project(sigma_b, formula.num_vars, 1)[1], 1.0)


def measure_solution(alive_state: PureState, rng: np.random.Generator) -> Assignment:
    """Sample a computational-basis outcome and return the solution-register bits."""
    probs = np.abs(alive_state.amplitudes) ** 2
    total = probs.sum()
    if total <= 0:
        raise ValueError("cannot measure a zero-norm state")
    idx = int(rng.choice(probs.size, p=probs / total))
    # drop the ancilla (least significant qubit)
    return Assignment.from_int(idx >> 1, alive_state.num_qubits - 1)


def run_doomsday(config: RunConfig) -> SolutionReport:
    if config.mode != "postselect":
        raise ValueError("run_doomsday needs mode='postselect'")
    slices = slice_states(config)
    alive, p_alive = postselect_alive(slices.sigma_c)
    solution = measure_solution(alive, np.random.default_rng(config.seed))
    if evaluate(config.formula, solution) != 1:
        raise RuntimeError(f"measured {solution} does not satisfy the formula")
    return SolutionReport(solution, p_alive, 1, gate_report(slices.circuit).total, slices.norms)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def runs_until_alive(p: float, cap: int, rng: np.random.Generator) -> int | None:
    """Index (1-based) of the first alive draw among at most ``cap`` runs, or None if censored."""
    done = 0
    while done < cap:
        size = min(_MC_CHUNK, cap - done)
        hits = np.flatnonzero(rng.random(size) < p)
        if hits.size:
            return done + int(hits[0]) + 1
        done += size
    return None


def monte_carlo(config: RunConfig) -> MonteCarloReport:
    """Repeat single circuit runs without post-selection until one survives.

    Trial t draws from its own stream seeded by (seed, t), so results do not
    depend on evaluation order. A survived trial contributes runs - 1 dead
    branches; a censored one contributes all ``max_runs`` of them.
    """
    if config.mode != "montecarlo":
        raise ValueError("monte_carlo needs mode='montecarlo'")
    n = config.formula.num_vars
    p = alive_probability(config.formula)
    cap = config.max_runs
    survived_runs = []
    dead = 0
    for t in range(config.trials):
        runs = runs_until_alive(p, cap, _trial_rng(config.seed, t))
        if runs is None:
            dead += cap
        else:
            survived_runs.append(runs)
            dead += runs - 1
    m_est = round(p * 2**n)
    expected = 2**n / m_est if m_est else None
    mean = float(np.mean(survived_runs)) if survived_runs else None
    return MonteCarloReport(config.trials, mean, dead, expected, len(survived_runs),
                            config.trials - len(survived_runs), p)
