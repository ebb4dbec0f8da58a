"""CNF instances: DIMACS I/O, the verification predicate, brute-force enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ENUMERATION_GUARD = 24


class DimacsError(ValueError):
    """Malformed DIMACS input. ``line`` is 1-based, or None for end-of-input errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError(f"num_vars must be non-negative, got {self.num_vars}")
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for j, clause in enumerate(clauses):
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {j}: literal {lit} out of range for n={self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @classmethod
    def from_lists(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> "CnfFormula":
        return cls(num_vars, tuple(tuple(c) for c in clauses))


@dataclass(frozen=True)
class Assignment:
    """Bit string s; ``bits[i]`` is the value of variable i+1.

    The string form puts variable 1 first, and the integer form treats it as
    the most significant bit, so ``Assignment.from_int(0b10, 2)`` is "10".
    """

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"assignment bits must be 0/1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    @classmethod
    def from_str(cls, text: str) -> "Assignment":
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def from_int(cls, value: int, n: int) -> "Assignment":
        if not 0 <= value < (1 << n):
            raise ValueError(f"{value} does not fit in {n} bits")
        return cls(tuple((value >> (n - 1 - i)) & 1 for i in range(n)))

    def to_int(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text. Clauses may span lines; a lone ``0`` is an empty clause."""
    header: tuple[int, int] | None = None
    header_line = 0
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    current_start = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"duplicate header (first at line {header_line})", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}, expected 'p cnf <n> <m>'", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer value in header {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise DimacsError("header counts must be non-negative", lineno)
            header, header_line = (n, m), lineno
            continue
        if header is None:
            raise DimacsError("clause data before 'p cnf' header", lineno)
        n = header[0]
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"non-integer token {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > n:
                raise DimacsError(f"literal {lit} out of range (n={n})", lineno)
            if not current:
                current_start = lineno
            current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("unterminated clause (missing trailing 0)", current_start)
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}", header_line)
    return CnfFormula(header[0], tuple(clauses))


def read_dimacs(path) -> CnfFormula:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


def serialize_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    lines.extend(" ".join([*map(str, c), "0"]) for c in formula.clauses)
    return "\n".join(lines) + "\n"


def _as_assignment(s) -> Assignment:
    if isinstance(s, Assignment):
        return s
    if isinstance(s, str):
        return Assignment.from_str(s)
    return Assignment(tuple(s))


def evaluate(formula: CnfFormula, s: Assignment | str | Sequence[int]) -> int:
    """f(s): 1 iff every clause has a literal satisfied by ``s``."""
    s = _as_assignment(s)
    if len(s) != formula.num_vars:
        raise ValueError(f"assignment has {len(s)} bits, formula has {formula.num_vars} variables")
    bits = s.bits
    for clause in formula.clauses:
        if not any(bits[abs(l) - 1] == (l > 0) for l in clause):
            return 0
    return 1


def brute_force_solutions(formula: CnfFormula, guard: int = ENUMERATION_GUARD) -> list[Assignment]:
    """All satisfying assignments in ascending integer order, one ``evaluate`` call each."""
    n = formula.num_vars
    if n > guard:
        raise ValueError(f"n={n} exceeds enumeration guard {guard}")
    out = []
    for value in range(1 << n):
        s = Assignment.from_int(value, n)
        if evaluate(formula, s):
            out.append(s)
    return out


def random_cnf(n: int, m: int, k: int = 3, rng: np.random.Generator | None = None,
               distinct: bool = True) -> CnfFormula:
    """Uniform random k-CNF. With ``distinct`` each clause uses k different variables."""
    rng = np.random.default_rng() if rng is None else rng
    clauses = []
    for _ in range(m):
        width = min(k, n) if distinct else k
        vars_ = rng.choice(n, size=width, replace=not distinct) + 1
        signs = rng.choice([-1, 1], size=width)
        clauses.append(tuple(int(v * sg) for v, sg in zip(vars_, signs)))
    return CnfFormula(n, tuple(clauses))
