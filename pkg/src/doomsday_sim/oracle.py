"""Reversible compilation of a CNF verifier into a multi-controlled-X network.

Qubit layout of a compiled circuit::

    [0, n)          solution register S (qubit i = variable i+1)
    [n, n+m)        one scratch qubit per clause
    n + m           result qubit y

For every basis input ``|s, 0...0, y>`` the circuit outputs ``|s, 0...0, y ^ f(s)>``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .cnf import CnfFormula


@dataclass(frozen=True)
class ReversibleGate:
    """Multi-controlled X. ``controls`` holds (qubit, polarity); polarity 0 is an anti-control."""

    controls: tuple[tuple[int, int], ...]
    target: int

    def __post_init__(self):
        qubits = [q for q, _ in self.controls]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate control qubits in {self.controls}")
        if self.target in qubits:
            raise ValueError(f"target {self.target} is also a control")
        if any(p not in (0, 1) for _, p in self.controls):
            raise ValueError(f"control polarity must be 0 or 1: {self.controls}")

    @property
    def arity(self) -> int:
        return len(self.controls)

    def __str__(self) -> str:
        ctrl = " ".join(f"{q}:{p}" for q, p in self.controls)
        return f"MCX [{ctrl}] -> {self.target}"


@dataclass(frozen=True)
class ReversibleCircuit:
    n_solution: int
    n_scratch: int
    gates: tuple[ReversibleGate, ...]

    def __post_init__(self):
        total = self.num_qubits
        for g in self.gates:
            if g.target >= total or any(q >= total for q, _ in g.controls):
                raise ValueError(f"gate {g} touches a qubit outside 0..{total - 1}")

    @property
    def num_qubits(self) -> int:
        return self.n_solution + self.n_scratch + 1

    @property
    def result_index(self) -> int:
        return self.n_solution + self.n_scratch

    def inverse(self) -> "ReversibleCircuit":
        return ReversibleCircuit(self.n_solution, self.n_scratch, self.gates[::-1])


def _clause_gates(clause: tuple[int, ...], scratch: int) -> list[ReversibleGate]:
    # control on the falsifying value of each literal, so the MCX computes NOT clause
    polarity: dict[int, int] = {}
    for lit in clause:
        q, pol = abs(lit) - 1, 0 if lit > 0 else 1
        if polarity.setdefault(q, pol) != pol:
            # x and not-x in one clause: tautology, scratch only needs the X
            return [ReversibleGate((), scratch)]
    mcx = ReversibleGate(tuple(polarity.items()), scratch)
    return [mcx, ReversibleGate((), scratch)]


def compile_oracle(formula: CnfFormula) -> ReversibleCircuit:
    """Build U with U|s, 0, y> = |s, 0, y ^ f(s)>; 4m + 1 gates for m clauses."""
    n, m = formula.num_vars, formula.num_clauses
    compute: list[ReversibleGate] = []
    for j, clause in enumerate(formula.clauses):
        compute.extend(_clause_gates(clause, n + j))
    conjunction = ReversibleGate(tuple((n + j, 1) for j in range(m)), n + m)
    gates = compute + [conjunction] + compute[::-1]
    return ReversibleCircuit(n, m, tuple(gates))


compile = compile_oracle  # noqa: A001 - name used by the module contract


def apply_bits(circuit: ReversibleCircuit, bits: np.ndarray) -> np.ndarray:
    """Apply the circuit to a batch of basis states, one per row of a 0/1 array."""
    bits = np.array(bits, dtype=np.uint8, copy=True)
    if bits.ndim != 2 or bits.shape[1] != circuit.num_qubits:
        raise ValueError(f"expected rows of {circuit.num_qubits} bits, got shape {bits.shape}")
    for g in circuit.gates:
        fire = np.ones(bits.shape[0], dtype=bool)
        for q, pol in g.controls:
            fire &= bits[:, q] == pol
        bits[:, g.target] ^= fire.astype(np.uint8)
    return bits


def apply_basis(circuit: ReversibleCircuit, basis: str) -> str:
    """Classical action on one basis string, qubit 0 first."""
    if len(basis) != circuit.num_qubits:
        raise ValueError(f"basis string has {len(basis)} bits, circuit has {circuit.num_qubits} qubits")
    row = np.array([[int(ch) for ch in basis]], dtype=np.uint8)
    return "".join(map(str, apply_bits(circuit, row)[0]))


def basis_permutation(circuit: ReversibleCircuit) -> np.ndarray:
    """perm[i] = index of the image of basis state i over the full register."""
    k = circuit.num_qubits
    idx = np.arange(1 << k, dtype=np.int64)
    out = apply_bits(circuit, index_to_bits(idx, k))
    return bits_to_index(out)


def index_to_bits(indices: np.ndarray, k: int) -> np.ndarray:
    """Rows of bits, qubit 0 as the most significant bit of the index."""
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(indices, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.uint8)


def bits_to_index(bits: np.ndarray) -> np.ndarray:
    k = bits.shape[1]
    weights = np.left_shift(np.int64(1), np.arange(k - 1, -1, -1, dtype=np.int64))
    return bits.astype(np.int64) @ weights


@dataclass(frozen=True)
class GateReport:
    by_arity: dict[int, int]
    total: int
    control_count: int


def gate_report(circuit: ReversibleCircuit) -> GateReport:
    hist = Counter(g.arity for g in circuit.gates)
    return GateReport(dict(sorted(hist.items())), len(circuit.gates),
                      sum(g.arity for g in circuit.gates))


def dump_circuit(circuit: ReversibleCircuit) -> str:
    lines = [f"qubits {circuit.n_solution} {circuit.n_scratch} {circuit.result_index}"]
    lines.extend(str(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def load_circuit(text: str) -> ReversibleCircuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "qubits" or len(head) != 4:
        raise ValueError(f"bad circuit header {lines[0]!r}")
    n_sol, n_scr, result = map(int, head[1:])
    if result != n_sol + n_scr:
        raise ValueError(f"result index {result} inconsistent with layout {n_sol}+{n_scr}")
    gates = []
    for ln in lines[1:]:
        if not ln.startswith("MCX [") or "] -> " not in ln:
            raise ValueError(f"bad gate line {ln!r}")
        ctrl, target = ln[len("MCX ["):].split("] -> ")
        controls = tuple((int(q), int(p)) for q, p in (c.split(":") for c in ctrl.split()))
        gates.append(ReversibleGate(controls, int(target)))
    return ReversibleCircuit(n_sol, n_scr, tuple(gates))
