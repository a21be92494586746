"""Circuit representation, the ``.qcx`` text format and structural utilities.

A circuit is an immutable list of gates over ``n_wires`` numbered wires.
The text format is line oriented::

    qubits 3
    H 0
    CX 0 1        # controls first, target last
    RK 3 2        # R_k with k=3 on wire 2; a negative k is the adjoint
    CRK 2 0 1

Gate names are case-insensitive on input and uppercase on output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GATE_ARITY",
    "CircuitParseError",
    "MutationError",
    "Gate",
    "Circuit",
    "GateStats",
    "parse_circuit",
    "serialize_circuit",
    "load_circuit",
    "inverse",
    "concat",
    "tensor_extend",
    "insert_gates",
    "idle_intervals",
    "gate_stats",
    "random_gate",
    "random_circuit",
    "mutate",
]

GATE_ARITY = {
    "X": 1, "Z": 1, "S": 1, "SDG": 1, "T": 1, "TDG": 1, "H": 1, "RK": 1,
    "CX": 2, "CZ": 2, "CRK": 2, "SWAP": 2,
    "CCX": 3, "CCZ": 3,
}
_PARAMETRIC = {"RK", "CRK"}
_ADJOINT = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}


class CircuitParseError(ValueError):
    """Malformed circuit text. Carries 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MutationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Gate:
    """One gate application.

    ``k`` is the rotation exponent for ``RK``/``CRK`` (phase ``sign(k)/2^|k|``
    turns on the ``|1>`` branch) and 0 for every other kind.
    """

    kind: str
    wires: tuple[int, ...]
    k: int = 0

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        if kind not in GATE_ARITY:
            raise ValueError(f"unknown gate {self.kind!r}")
        if len(self.wires) != GATE_ARITY[kind]:
            raise ValueError(f"{kind} takes {GATE_ARITY[kind]} wire(s), got {len(self.wires)}")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"duplicate wire in {kind} {self.wires}")
        if any(w < 0 for w in self.wires):
            raise ValueError(f"negative wire index in {kind} {self.wires}")
        if kind in _PARAMETRIC:
            if self.k == 0:
                raise ValueError(f"{kind} exponent must be nonzero")
        elif self.k != 0:
            raise ValueError(f"{kind} takes no exponent")

    def adjoint(self) -> Gate:
        if self.kind in _ADJOINT:
            return Gate(_ADJOINT[self.kind], self.wires)
        if self.kind in _PARAMETRIC:
            return Gate(self.kind, self.wires, -self.k)
        return self

    def to_text(self) -> str:
        args = [str(self.k)] if self.kind in _PARAMETRIC else []
        args += [str(w) for w in self.wires]
        return " ".join([self.kind, *args])

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class Circuit:
    n_wires: int
    gates: tuple[Gate, ...] = ()
    # Not carried by the text format, so excluded from equality.
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_wires < 0:
            raise ValueError("n_wires must be non-negative")
        for pos, g in enumerate(self.gates):
            for w in g.wires:
                if w >= self.n_wires:
                    raise ValueError(f"gate {pos} ({g}) uses wire {w} out of range for {self.n_wires} wires")
        if self.labels is not None and len(self.labels) != self.n_wires:
            raise ValueError("labels must name every wire")

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        return concat(self, other)


@dataclass(frozen=True)
class GateStats:
    n_wires: int
    total_gates: int
    clifford_count: int
    t_count: int
    rotation_count: int


def _parse_int(tok: str, lineno: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitParseError(f"expected integer, got {tok!r}", lineno, col) from None


def _tokens(line: str):
    """Yield (token, 1-based column) pairs."""
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield tok, col + 1
        col += len(tok)


def parse_circuit(text: str) -> Circuit:
    n_wires = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        if n_wires is None:
            head, col = toks[0]
            if head.lower() != "qubits" or len(toks) != 2:
                raise CircuitParseError("expected header 'qubits <n>'", lineno, col)
            n_wires = _parse_int(toks[1][0], lineno, toks[1][1])
            if n_wires < 0:
                raise CircuitParseError("qubit count must be non-negative", lineno, toks[1][1])
            continue
        name, col = toks[0]
        kind = name.upper()
        if kind not in GATE_ARITY:
            raise CircuitParseError(f"unknown gate {name!r}", lineno, col)
        args = [(_parse_int(t, lineno, c), c) for t, c in toks[1:]]
        k = 0
        if kind in _PARAMETRIC:
            if not args:
                raise CircuitParseError(f"{kind} needs an exponent", lineno, col)
            (k, kcol), args = args[0], args[1:]
            if k == 0:
                raise CircuitParseError(f"{kind} exponent must be nonzero", lineno, kcol)
        if len(args) != GATE_ARITY[kind]:
            raise CircuitParseError(
                f"{kind} takes {GATE_ARITY[kind]} wire(s), got {len(args)}", lineno, col)
        seen = set()
        for w, c in args:
            if w < 0 or w >= n_wires:
                raise CircuitParseError(f"wire {w} out of range for {n_wires} qubit(s)", lineno, c)
            if w in seen:
                raise CircuitParseError(f"duplicate wire {w} in {kind}", lineno, c)
            seen.add(w)
        gates.append(Gate(kind, tuple(w for w, _ in args), k))
    if n_wires is None:
        raise CircuitParseError("missing 'qubits <n>' header", 1)
    return Circuit(n_wires, tuple(gates))


def serialize_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_wires}"]
    lines.extend(g.to_text() for g in c.gates)
    return "\n".join(lines) + "\n"


def load_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_circuit(fh.read())


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.n_wires, tuple(g.adjoint() for g in reversed(c.gates)), c.labels)


def concat(a: Circuit, b: Circuit) -> Circuit:
    if a.n_wires != b.n_wires:
        raise ValueError(f"wire-count mismatch: {a.n_wires} vs {b.n_wires}")
    return Circuit(a.n_wires, a.gates + b.gates, a.labels)


def tensor_extend(c: Circuit, k: int) -> Circuit:
    """Append ``k`` idle wires, i.e. ``C ⊗ I^{⊗k}``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return c
    return Circuit(c.n_wires + k, c.gates)


def insert_gates(c: Circuit, pos: int, gates: Sequence[Gate]) -> Circuit:
    if not 0 <= pos <= len(c.gates):
        raise IndexError(f"insertion point {pos} outside [0, {len(c.gates)}]")
    return Circuit(c.n_wires, c.gates[:pos] + tuple(gates) + c.gates[pos:], c.labels)


def idle_intervals(c: Circuit, wires: Iterable[int]) -> list[tuple[int, int]]:
    """Maximal nonempty half-open gate ranges ``[p, q)`` that never touch ``wires``."""
    wires = set(wires)
    bad = [w for w in wires if not 0 <= w < c.n_wires]
    if bad:
        raise ValueError(f"wires {bad} not in circuit")
    out = []
    start = 0
    for pos, g in enumerate(c.gates):
        if wires.intersection(g.wires):
            if pos > start:
                out.append((start, pos))
            start = pos + 1
    if len(c.gates) > start:
        out.append((start, len(c.gates)))
    return out


def gate_stats(c: Circuit) -> GateStats:
    """Gate counts in the Clifford / T-like / other-non-Clifford split.

    ``RK`` with ``|k| <= 2`` is Z or S (Clifford); ``|k| == 3`` is T-like.
    ``CRK`` with ``|k| == 1`` is CZ. Everything else that is not Clifford or
    T-like (larger rotations, controlled rotations, CCX, CCZ) is counted
    under ``rotation_count``.
    """
    cliff = t = other = 0
    for g in c.gates:
        if g.kind in ("T", "TDG") or (g.kind == "RK" and abs(g.k) == 3):
            t += 1
        elif g.kind == "RK":
            if abs(g.k) <= 2:
                cliff += 1
            else:
                other += 1
        elif g.kind == "CRK":
            if abs(g.k) == 1:
                cliff += 1
            else:
                other += 1
        elif g.kind in ("CCX", "CCZ"):
            other += 1
        else:
            cliff += 1
    return GateStats(c.n_wires, len(c.gates), cliff, t, other)


_RANDOM_KINDS = ("X", "Z", "S", "SDG", "T", "TDG", "H", "RK", "CX", "CZ", "CRK", "SWAP", "CCX", "CCZ")


def random_gate(rng: np.random.Generator, wires: Sequence[int],
                kinds: Sequence[str] = _RANDOM_KINDS) -> Gate:
    """A uniformly drawn gate kind (among those that fit) on distinct random ``wires``."""
    wires = list(wires)
    usable = [k for k in kinds if GATE_ARITY[k] <= len(wires)]
    if not usable:
        raise ValueError("no gate kind fits the available wires")
    kind = usable[rng.integers(len(usable))]
    chosen = rng.choice(len(wires), size=GATE_ARITY[kind], replace=False)
    k = 0
    if kind in _PARAMETRIC:
        k = int(rng.integers(1, 5)) * (1 if rng.random() < 0.5 else -1)
    return Gate(kind, tuple(wires[i] for i in chosen), k)


def random_circuit(rng: np.random.Generator, n_wires: int, n_gates: int,
                   kinds: Sequence[str] = _RANDOM_KINDS) -> Circuit:
    wires = range(n_wires)
    return Circuit(n_wires, tuple(random_gate(rng, wires, kinds) for _ in range(n_gates)))


def _same_operator(a: Gate | None, b: Gate | None) -> bool:
    from .sim import gate_unitary_on, unitary_equal_up_to_phase

    support = sorted(set(a.wires if a else ()) | set(b.wires if b else ()))
    ua = gate_unitary_on(a, support)
    ub = gate_unitary_on(b, support)
    return unitary_equal_up_to_phase(ua, ub, 1e-9)


def mutate(c: Circuit, seed: int, oracle_limit: int = 10, max_tries: int = 100) -> Circuit:
    """Apply one random insert / delete / replace edit that changes the unitary.

    Every candidate edit is screened locally (the edited gate must differ
    from what it replaces as an operator), so a single edit always changes
    the circuit. For ``n_wires <= oracle_limit`` the result is additionally
    compared against the statevector oracle.
    """
    from .sim import circuit_unitary, unitary_equal_up_to_phase

    if c.n_wires == 0:
        raise MutationError("cannot mutate a circuit without wires")
    rng = np.random.default_rng(seed)
    reference = circuit_unitary(c) if c.n_wires <= oracle_limit else None
    wires = range(c.n_wires)
    for _ in range(max_tries):
        edit = "insert" if not c.gates else ("insert", "delete", "replace")[rng.integers(3)]
        pos = int(rng.integers(len(c.gates) + (edit == "insert")))
        if edit == "insert":
            new = random_gate(rng, wires)
            if _same_operator(new, None):
                continue
            out = insert_gates(c, pos, [new])
        elif edit == "delete":
            if _same_operator(c.gates[pos], None):
                continue
            out = Circuit(c.n_wires, c.gates[:pos] + c.gates[pos + 1:], c.labels)
        else:
            new = random_gate(rng, wires)
            if _same_operator(new, c.gates[pos]):
                continue
            out = Circuit(c.n_wires, c.gates[:pos] + (new,) + c.gates[pos + 1:], c.labels)
        if reference is not None and unitary_equal_up_to_phase(reference, circuit_unitary(out), 1e-9):
            continue
        return out
    raise MutationError(f"no inequivalent edit found in {max_tries} tries")
