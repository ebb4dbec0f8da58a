"""Desk-scale simulator of post-selected NP search with a doomsday channel."""

from .cnf import Assignment, CnfFormula, DimacsError, brute_force_solutions, evaluate, parse_dimacs, serialize_dimacs
from .doomsday import (AllObserversDead, KrausSet, ObserverRegister, anti_controlled_doomsday, demo_cat,
                       gibbs_state, postselect_alive, replacer_kraus)
from .oracle import ReversibleCircuit, ReversibleGate, apply_basis, compile_oracle, gate_report
from .pipeline import RunConfig, measure_solution, monte_carlo, run_doomsday, slice_states
from .quantum import BranchedState, DensityMatrix, PureState, dense_sigma, fidelity, project, uniform_superposition

__all__ = [
    "AllObserversDead", "Assignment", "BranchedState", "CnfFormula", "DensityMatrix", "DimacsError",
    "KrausSet", "ObserverRegister", "PureState", "ReversibleCircuit", "ReversibleGate", "RunConfig",
    "anti_controlled_doomsday", "apply_basis", "brute_force_solutions", "compile_oracle", "demo_cat",
    "dense_sigma", "evaluate", "fidelity", "gate_report", "gibbs_state", "measure_solution",
    "monte_carlo", "parse_dimacs", "postselect_alive", "project", "replacer_kraus", "run_doomsday",
    "serialize_dimacs", "slice_states", "uniform_superposition",
]
