"""Thermal replacer channel on the observer register, anti-controlled on the ancilla."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .quantum import Branch, BranchedState, DensityMatrix, PureState, project


class AllObserversDead(RuntimeError):
    """The alive branch carries no weight: the instance has no solution."""

    def __init__(self, p_alive: float = 0.0):
        self.p_alive = p_alive
        super().__init__("all branches observer-free: instance unsatisfiable")


@dataclass(frozen=True, eq=False)
class ObserverRegister:
    """Observer Hamiltonian given by spectrum (and optional eigenvector columns), beta, and rho."""

    dim: int = 2
    energies: tuple[float, ...] = (0.0, 1.0)
    beta: float = 1.0
    eigenbasis: np.ndarray | None = None
    initial: DensityMatrix | None = field(default=None)

    def __post_init__(self):
        energies = tuple(float(e) for e in self.energies)
        if self.dim < 1 or len(energies) != self.dim:
            raise ValueError(f"need {self.dim} energies, got {len(energies)}")
        if not all(math.isfinite(e) for e in energies):
            raise ValueError("energies must be finite")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")
        object.__setattr__(self, "energies", energies)
        if self.eigenbasis is not None:
            v = np.array(self.eigenbasis, dtype=complex)
            if v.shape != (self.dim, self.dim):
                raise ValueError(f"eigenbasis shape {v.shape} != ({self.dim}, {self.dim})")
            if np.max(np.abs(v.conj().T @ v - np.eye(self.dim))) > 1e-10:
                raise ValueError("eigenbasis is not unitary")
            v.setflags(write=False)
            object.__setattr__(self, "eigenbasis", v)
        if self.initial is None:
            object.__setattr__(self, "initial", self.ground_state())
        else:
            rho = self.initial if isinstance(self.initial, DensityMatrix) else DensityMatrix(self.initial)
            if rho.dim != self.dim:
                raise ValueError(f"initial state has dimension {rho.dim}, expected {self.dim}")
            rho.check()
            if abs(rho.trace - 1.0) > 1e-10:
                raise ValueError(f"initial state trace {rho.trace} != 1")
            object.__setattr__(self, "initial", rho)

    @property
    def basis(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex) if self.eigenbasis is None else self.eigenbasis

    def hamiltonian(self) -> np.ndarray:
        v = self.basis
        return (v * np.array(self.energies)) @ v.conj().T

    def ground_state(self) -> DensityMatrix:
        g = self.basis[:, int(np.argmin(self.energies))]
        return DensityMatrix(np.outer(g, g.conj()))


def gibbs_weights(energies, beta: float) -> np.ndarray:
    """Boltzmann weights, shifted by the minimum energy so large beta cannot overflow."""
    e = np.asarray(energies, dtype=float)
    w = np.exp(-beta * (e - e.min()))
    return w / w.sum()


def gibbs_state(obs: ObserverRegister) -> DensityMatrix:
    """omega_beta = exp(-beta H) / Tr exp(-beta H)."""
    w = gibbs_weights(obs.energies, obs.beta)
    v = obs.basis
    return DensityMatrix((v * w) @ v.conj().T)


@dataclass(frozen=True, eq=False)
class KrausSet:
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.operators)
        d = ops[0].shape[1]
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(d))) > 1e-10:
            raise ValueError("Kraus operators are not trace preserving")
        object.__setattr__(self, "operators", ops)

    def __len__(self) -> int:
        return len(self.operators)

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        m = rho.matrix
        return DensityMatrix(sum(k @ m @ k.conj().T for k in self.operators))


def replacer_kraus(omega: DensityMatrix, cutoff: float = 0.0) -> KrausSet:
    """Kraus form of rho -> Tr(rho) omega: K_ij = sqrt(w_i) |omega_i><j|.

    Diagonal ``omega`` uses the computational basis directly; otherwise it is
    diagonalized. Terms with weight <= ``cutoff`` are dropped.
    """
    m = omega.matrix
    if abs(omega.trace - 1.0) > 1e-8:
        raise ValueError(f"omega has trace {omega.trace}, expected 1")
    d = omega.dim
    if np.count_nonzero(m - np.diag(np.diag(m))) == 0:
        w, vecs = np.diag(m).real.copy(), np.eye(d, dtype=complex)
    else:
        w, vecs = np.linalg.eigh(m)
    if w.min() < -1e-10:
        raise ValueError("omega is not positive semidefinite")
    ops = []
    for i in range(d):
        if w[i] <= cutoff:
            continue
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[:, j] = math.sqrt(w[i]) * vecs[:, i]
            ops.append(k)
    return KrausSet(tuple(ops))


def _check_normalized(state: PureState) -> None:
    if abs(state.norm_sq - 1.0) > 1e-8:
        raise ValueError(f"state norm^2 {state.norm_sq} is not 1")


def anti_controlled_doomsday(psi_b: PureState, obs: ObserverRegister,
                             ancilla: int | None = None) -> BranchedState:
    """Apply {P1 (x) I} u {P0 (x) K_a} to |psi_B><psi_B| (x) rho.

    The ancilla defaults to the last qubit of ``psi_b``. Returns the alive
    branch (P1 psi_B, rho) and the dead branch (P0 psi_B, omega_beta).
    """
    _check_normalized(psi_b)
    ancilla = psi_b.num_qubits - 1 if ancilla is None else ancilla
    alive, _ = project(psi_b, ancilla, 1)
    dead, _ = project(psi_b, ancilla, 0)
    kraus = replacer_kraus(gibbs_state(obs))
    return BranchedState((
        Branch("alive", alive, obs.initial),
        Branch("dead", dead, kraus.apply(obs.initial)),
    ))


def apply_dense(psi_b: PureState, obs: ObserverRegister, ancilla: int | None = None) -> DensityMatrix:
    """Reference path: the same controlled channel as full Kraus matrices on S x A x O."""
    _check_normalized(psi_b)
    k = psi_b.num_qubits
    ancilla = k - 1 if ancilla is None else ancilla
    bit = (np.arange(1 << k) >> (k - 1 - ancilla)) & 1
    p1 = np.diag((bit == 1).astype(complex))
    p0 = np.diag((bit == 0).astype(complex))
    ops = [np.kron(p1, np.eye(obs.dim))]
    ops += [np.kron(p0, ka) for ka in replacer_kraus(gibbs_state(obs)).operators]
    v = psi_b.amplitudes
    rho = np.kron(np.outer(v, v.conj()), obs.initial.matrix)
    return DensityMatrix(sum(op @ rho @ op.conj().T for op in ops))


def postselect_alive(sigma_c: BranchedState, threshold: float = 1e-15) -> tuple[PureState, float]:
    """Condition on observers existing; returns the renormalized alive S x A state and its weight."""
    alive = sigma_c.branch("alive")
    p = alive.weight
    if p < threshold:
        raise AllObserversDead(p)
    return alive.sa_state.scaled(1.0 / math.sqrt(p)), p


def demo_cat(a: complex, b: complex, obs: ObserverRegister | None = None) -> tuple[float, float]:
    """a|0>|dead> + b|1>|alive>: one qubit whose |0> sector triggers the channel."""
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-10:
        raise ValueError("amplitudes are not normalized")
    obs = ObserverRegister() if obs is None else obs
    sigma = anti_controlled_doomsday(PureState(1, [a, b]), obs, ancilla=0)
    return sigma.branch("dead").weight, sigma.branch("alive").weight


def _complex_matrix(spec, d: int) -> np.ndarray:
    arr = np.array(spec, dtype=float)
    if arr.shape == (d * d, 2):
        arr = arr.reshape(d, d, 2)
    if arr.shape != (d, d, 2):
        raise ValueError(f"expected {d}x{d} complex pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def observer_from_dict(spec: dict) -> ObserverRegister:
    """Build an observer from ``dim``, ``energies``, ``beta``, ``eigenbasis``, ``initial``."""
    unknown = set(spec) - {"dim", "energies", "beta", "eigenbasis", "initial"}
    if unknown:
        raise ValueError(f"unknown observer fields: {sorted(unknown)}")
    try:
        d = int(spec["dim"])
        energies = tuple(float(e) for e in spec["energies"])
        beta = float(spec["beta"])
    except KeyError as e:
        raise ValueError(f"observer spec missing field {e.args[0]!r}") from None
    eig = _complex_matrix(spec["eigenbasis"], d) if spec.get("eigenbasis") is not None else None
    obs = ObserverRegister(d, energies, beta, eig)
    init = spec.get("initial", "ground")
    if init == "ground":
        return obs
    if init == "gibbs":
        rho = gibbs_state(obs)
    elif isinstance(init, str):
        raise ValueError(f"initial must be 'ground', 'gibbs' or a matrix, got {init!r}")
    else:
        rho = DensityMatrix(_complex_matrix(init, d))
    return ObserverRegister(d, energies, beta, eig, rho)


def load_observer(path) -> ObserverRegister:
    return observer_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
