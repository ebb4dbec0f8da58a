"""Dense state containers and the few linear-algebra operations the pipeline needs.

Endianness: basis index ``i`` of a k-qubit register has qubit 0 as its most
significant bit, so qubit q holds ``(i >> (k - 1 - q)) & 1``. On S x A the
ancilla is the last (least significant) qubit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .oracle import ReversibleCircuit, apply_bits, basis_permutation, bits_to_index, index_to_bits

MAX_QUBITS = 26
MAX_DENSE_DIM = 4096


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Amplitude vector over ``num_qubits`` qubits; may be subnormalized."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        if amps.size != 1 << self.num_qubits:
            raise ValueError(f"{amps.size} amplitudes for {self.num_qubits} qubits")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq))

    @classmethod
    def basis(cls, label: int | str, num_qubits: int | None = None) -> "PureState":
        if isinstance(label, str):
            num_qubits, label = len(label), int(label, 2) if label else 0
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[label] = 1.0
        return cls(num_qubits, amps)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def scaled(self, factor: complex) -> "PureState":
        return PureState(self.num_qubits, self.amplitudes * factor)

    def normalized(self) -> "PureState":
        return self.scaled(1.0 / self.norm)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def check(self, herm_tol: float = 1e-12, psd_tol: float = 1e-10) -> None:
        """Raise ValueError unless Hermitian, PSD and 0 < trace <= 1 (up to tolerance)."""
        m = self.matrix
        if np.max(np.abs(m - m.conj().T), initial=0.0) > herm_tol:
            raise ValueError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(m).min(initial=0.0) < -psd_tol:
            raise ValueError("density matrix is not positive semidefinite")
        tr = self.trace
        if not 0.0 < tr <= 1.0 + herm_tol:
            raise ValueError(f"density matrix trace {tr} outside (0, 1]")

    def is_pure(self, tol: float = 1e-10) -> bool:
        tr = self.trace
        purity = float(np.real(np.vdot(self.matrix, self.matrix)))
        return abs(purity - tr * tr) <= tol


@dataclass(frozen=True, eq=False)
class Branch:
    label: Literal["alive", "dead"]
    sa_state: PureState
    observer: DensityMatrix

    @property
    def weight(self) -> float:
        return self.sa_state.norm_sq


@dataclass(frozen=True, eq=False)
class BranchedState:
    """sigma_C as sum_b |sa_b><sa_b| (x) observer_b, one alive and one dead term."""

    branches: tuple[Branch, ...]

    def branch(self, label: str) -> Branch:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(label)

    @property
    def total_weight(self) -> float:
        return sum(b.weight for b in self.branches)


def index_to_bitstring(index: int, k: int) -> str:
    return format(index, f"0{k}b") if k else ""


def bitstring_to_index(bits: str) -> int:
    return int(bits, 2) if bits else 0


def uniform_superposition(n: int) -> PureState:
    """H^n |0...0>: every amplitude 2**(-n/2)."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count {n} outside 1..{MAX_QUBITS}")
    return PureState(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=complex))


def tensor(a: PureState, b: PureState) -> PureState:
    return PureState(a.num_qubits + b.num_qubits, np.kron(a.amplitudes, b.amplitudes))


def apply_circuit_to_state(circuit: ReversibleCircuit, state: PureState) -> PureState:
    """Permute amplitudes over the full register (S, scratch, y)."""
    if state.num_qubits != circuit.num_qubits:
        raise ValueError(f"state has {state.num_qubits} qubits, circuit needs {circuit.num_qubits}")
    if circuit.num_qubits > MAX_QUBITS:
        raise ValueError(f"{circuit.num_qubits} qubits exceeds dense guard {MAX_QUBITS}")
    out = np.zeros_like(state.amplitudes)
    out[basis_permutation(circuit)] = state.amplitudes
    return PureState(state.num_qubits, out)


def apply_oracle_compact(circuit: ReversibleCircuit, sa_state: PureState) -> PureState:
    """Apply the oracle to an S x A state with the scratch register implicitly |0...0>.

    Each S x A basis label (s, y) is lifted to (s, 0, y), run through the
    circuit, checked for a clean scratch register, and projected back. Only
    labels with nonzero amplitude are touched, so the scratch width never
    enters the memory footprint.
    """
    n, m = circuit.n_solution, circuit.n_scratch
    if sa_state.num_qubits != n + 1:
        raise ValueError(f"state has {sa_state.num_qubits} qubits, expected n+1 = {n + 1}")
    support = np.flatnonzero(sa_state.amplitudes)
    sa_bits = index_to_bits(support, n + 1)
    full = np.zeros((support.size, n + m + 1), dtype=np.uint8)
    full[:, :n] = sa_bits[:, :n]
    full[:, -1] = sa_bits[:, -1]
    out = apply_bits(circuit, full)
    if out[:, n:n + m].any():
        raise RuntimeError("oracle left scratch qubits dirty")
    back = np.concatenate([out[:, :n], out[:, -1:]], axis=1)
    amps = np.zeros_like(sa_state.amplitudes)
    amps[bits_to_index(back)] = sa_state.amplitudes[support]
    return PureState(n + 1, amps)


def drop_clean_qubits(state: PureState, keep: list[int]) -> PureState:
    """Restrict to the qubits in ``keep``; every other qubit must be |0> (else ValueError)."""
    k = state.num_qubits
    support = np.flatnonzero(state.amplitudes)
    bits = index_to_bits(support, k)
    dropped = [q for q in range(k) if q not in keep]
    if dropped and bits[:, dropped].any():
        raise ValueError("dropped qubits are not in |0>")
    amps = np.zeros(1 << len(keep), dtype=complex)
    amps[bits_to_index(bits[:, keep])] = state.amplitudes[support]
    return PureState(len(keep), amps)


def project(state: PureState, qubit: int, value: int) -> tuple[PureState, float]:
    """Zero amplitudes where ``qubit`` != ``value``; no renormalization."""
    k = state.num_qubits
    if not 0 <= qubit < k:
        raise IndexError(f"qubit {qubit} out of range for {k} qubits")
    bit = (np.arange(1 << k) >> (k - 1 - qubit)) & 1
    amps = np.where(bit == value, state.amplitudes, 0)
    kept = PureState(k, amps)
    return kept, kept.norm_sq


def partial_trace(rho: DensityMatrix, dims: tuple[int, ...], keep: tuple[int, ...]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``."""
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    for count, i in enumerate(sorted(traced, reverse=True)):
        cur = n - count
        t = np.trace(t, axis1=i, axis2=i + cur)
    d = int(np.prod([dims[i] for i in keep]))
    return DensityMatrix(t.reshape(d, d))


def dense_sigma(branched: BranchedState) -> DensityMatrix:
    """sum_b |sa_b><sa_b| (x) observer_b as one matrix."""
    first = branched.branches[0]
    dim = first.sa_state.amplitudes.size * first.observer.dim
    if dim > MAX_DENSE_DIM:
        raise ValueError(f"dense dimension {dim} exceeds guard {MAX_DENSE_DIM}")
    out = np.zeros((dim, dim), dtype=complex)
    for b in branched.branches:
        if b.sa_state.amplitudes.size * b.observer.dim != dim:
            raise ValueError("branch dimensions disagree")
        v = b.sa_state.amplitudes
        out += np.kron(np.outer(v, v.conj()), b.observer.matrix)
    return DensityMatrix(out)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def fidelity(a: DensityMatrix, b: DensityMatrix) -> float:
    """Squared Uhlmann fidelity; reduces to <psi|b|psi> when ``a`` or ``b`` is pure."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch {a.dim} vs {b.dim}")
    for name, r in (("first", a), ("second", b)):
        if abs(r.trace - 1.0) > 1e-8:
            raise ValueError(f"{name} argument has trace {r.trace}, expected 1")
    if b.is_pure() and not a.is_pure():
        a, b = b, a
    if a.is_pure():
        w, v = np.linalg.eigh(a.matrix)
        psi = v[:, -1]
        f = float(np.real(psi.conj() @ b.matrix @ psi))
    else:
        sa = _psd_sqrt(a.matrix)
        inner = sa @ b.matrix @ sa
        f = float(np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(inner), 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def format_amplitudes(state: PureState, tol: float = 0.0) -> list[str]:
    """Rows ``index bitstring re im`` with 17 significant digits; entries with |amp| <= tol skipped."""
    rows = []
    k = state.num_qubits
    for i, amp in enumerate(state.amplitudes):
        if abs(amp) > tol:
            rows.append(f"{i} {index_to_bitstring(i, k)} {amp.real:.17g} {amp.imag:.17g}")
    return rows


def parse_amplitudes(rows: list[str], num_qubits: int) -> PureState:
    amps = np.zeros(1 << num_qubits, dtype=complex)
    for row in rows:
        idx, bits, re, im = row.split()
        if bitstring_to_index(bits) != int(idx):
            raise ValueError(f"row {row!r}: index and bitstring disagree")
        amps[int(idx)] = complex(float(re), float(im))
    return PureState(num_qubits, amps)
