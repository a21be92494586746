"""Dense statevector simulator used as the brute-force ground truth.

Basis convention: wire 0 is the most significant bit, so the bitstring
``"011"`` is basis index 3 and ``state.reshape((2,) * n)[b0, b1, b2]`` is
its amplitude.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .circuit import Circuit, Gate

__all__ = [
    "WireLimitError",
    "STATE_WIRE_LIMIT",
    "UNITARY_WIRE_LIMIT",
    "basis_index",
    "index_bits",
    "apply_gate",
    "simulate_state",
    "circuit_unitary",
    "gate_unitary_on",
    "unitary_equal_up_to_phase",
    "implementation_computes",
    "PAULIS",
    "single_qubit_cliffords",
    "clifford_twirl_sum",
    "clifford_twirl_check",
]

STATE_WIRE_LIMIT = 24
UNITARY_WIRE_LIMIT = 10
_R = 1 / np.sqrt(2)


class WireLimitError(ValueError):
    pass


def basis_index(bits) -> int:
    if isinstance(bits, str):
        bits = [int(b) for b in bits]
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        idx = (idx << 1) | b
    return idx


def index_bits(idx: int, n: int) -> str:
    return format(idx, f"0{n}b") if n else ""


def _phase(g: Gate) -> complex:
    if g.kind in ("Z", "CZ", "CCZ"):
        return -1.0
    if g.kind == "S":
        return 1j
    if g.kind == "SDG":
        return -1j
    if g.kind == "T":
        return np.exp(1j * np.pi / 4)
    if g.kind == "TDG":
        return np.exp(-1j * np.pi / 4)
    # RK / CRK: e^{2 pi i sign(k) / 2^|k|}
    return np.exp(2j * np.pi * np.sign(g.k) / 2 ** abs(g.k))


def _idx(ndim: int, fixed: Mapping[int, int]):
    sl = [slice(None)] * ndim
    for axis, val in fixed.items():
        sl[axis] = val
    return tuple(sl)


def apply_gate(state: np.ndarray, g: Gate) -> None:
    """Apply ``g`` in place to a tensor whose first axes are the wires.

    Trailing axes beyond the wire axes are batch axes and are left alone.
    """
    nd = state.ndim
    w = g.wires
    kind = g.kind
    if kind in ("Z", "S", "SDG", "T", "TDG", "RK", "CZ", "CRK", "CCZ"):
        state[_idx(nd, {q: 1 for q in w})] *= _phase(g)
    elif kind in ("X", "CX", "CCX"):
        ctrl = {q: 1 for q in w[:-1]}
        t = w[-1]
        i0, i1 = _idx(nd, {**ctrl, t: 0}), _idx(nd, {**ctrl, t: 1})
        tmp = state[i0].copy()
        state[i0] = state[i1]
        state[i1] = tmp
    elif kind == "SWAP":
        a, b = w
        i01, i10 = _idx(nd, {a: 0, b: 1}), _idx(nd, {a: 1, b: 0})
        tmp = state[i01].copy()
        state[i01] = state[i10]
        state[i10] = tmp
    elif kind == "H":
        i0, i1 = _idx(nd, {w[0]: 0}), _idx(nd, {w[0]: 1})
        a = state[i0].copy()
        b = state[i1].copy()
        state[i0] = (a + b) * _R
        state[i1] = (a - b) * _R
    else:  # pragma: no cover - Gate validates kinds
        raise ValueError(f"unsupported gate {kind}")


def simulate_state(c: Circuit, x="") -> np.ndarray:
    """Run ``c`` on the basis state ``|x>`` and return the 2^n amplitudes."""
    n = c.n_wires
    if n > STATE_WIRE_LIMIT:
        raise WireLimitError(f"{n} wires exceeds the statevector limit of {STATE_WIRE_LIMIT}")
    if isinstance(x, (int, np.integer)):
        x = index_bits(int(x), n)
    if len(x) != n:
        raise ValueError(f"input has {len(x)} bits, circuit has {n} wires")
    state = np.zeros((2,) * n, dtype=complex)
    state[tuple(int(b) for b in x)] = 1.0
    for g in c.gates:
        apply_gate(state, g)
    return state.reshape(-1)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Full 2^n x 2^n unitary; column ``x`` is ``simulate_state(c, x)``.

    All columns are propagated together as a batch axis.
    """
    n = c.n_wires
    if n > UNITARY_WIRE_LIMIT:
        raise WireLimitError(f"{n} wires exceeds the unitary limit of {UNITARY_WIRE_LIMIT}")
    dim = 2 ** n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        apply_gate(state, g)
    return state.reshape(dim, dim)


def gate_unitary_on(g: Gate | None, support: Sequence[int]) -> np.ndarray:
    """Matrix of ``g`` (or the identity for None) on the ordered wires ``support``."""
    support = list(support)
    pos = {w: i for i, w in enumerate(support)}
    gates = () if g is None else (Gate(g.kind, tuple(pos[w] for w in g.wires), g.k),)
    return circuit_unitary(Circuit(len(support), gates))


def unitary_equal_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    flat_u, flat_v = u.reshape(-1), v.reshape(-1)
    big = np.flatnonzero(np.abs(flat_u) > tol)
    if big.size == 0:
        return bool(np.max(np.abs(flat_v), initial=0.0) <= tol)
    i = big[0]
    if abs(flat_v[i]) <= tol:
        return False
    gamma = flat_u[i] / flat_v[i]
    gamma /= abs(gamma)
    return bool(np.max(np.abs(flat_u - gamma * flat_v)) <= tol)


def implementation_computes(impl, truth_table: Mapping, tol: float = 1e-9) -> bool:
    """True iff ``impl`` maps every data input ``x`` to ``truth_table[x]`` with certainty.

    The data register is loaded with ``x`` first, then ``impl.prep`` and
    ``impl.main`` run; only the data wires are read out. Table keys and
    values are bit tuples (or bitstrings) over ``impl.data_wires``.
    """
    n = impl.main.n_wires
    if n > UNITARY_WIRE_LIMIT:
        raise WireLimitError(f"{n} wires exceeds the limit of {UNITARY_WIRE_LIMIT}")
    data = list(impl.data_wires)
    table = {tuple(int(b) for b in k): tuple(int(b) for b in v) for k, v in truth_table.items()}
    circuit = impl.prep + impl.main
    for x in itertools.product((0, 1), repeat=len(data)):
        if x not in table:
            raise ValueError(f"truth table has no entry for input {x}")
        bits = [0] * n
        for w, b in zip(data, x):
            bits[w] = b
        probs = np.abs(simulate_state(circuit, bits).reshape((2,) * n)) ** 2
        others = tuple(w for w in range(n) if w not in data)
        marginal = probs.sum(axis=others) if others else probs
        # marginal axes follow the sorted data wires
        order = sorted(range(len(data)), key=lambda i: data[i])
        want = tuple(table[x][i] for i in order)
        if marginal[want] < 1 - tol:
            return False
    return True


PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _phase_key(m: np.ndarray):
    flat = m.reshape(-1)
    lead = flat[np.flatnonzero(np.abs(flat) > 1e-9)[0]]
    norm = m * (abs(lead) / lead)
    return tuple(np.round(norm.reshape(-1), 9).tolist())


@lru_cache(maxsize=None)
def _clifford_tuple():
    h = np.array([[1, 1], [1, -1]], dtype=complex) * _R
    s = np.array([[1, 0], [0, 1j]], dtype=complex)
    group = {_phase_key(np.eye(2)): np.eye(2, dtype=complex)}
    frontier = list(group.values())
    while frontier:
        nxt = []
        for m in frontier:
            for gen in (h, s):
                p = gen @ m
                key = _phase_key(p)
                if key not in group:
                    group[key] = p
                    nxt.append(p)
        frontier = nxt
    if len(group) != 24:
        raise AssertionError(f"single-qubit Clifford closure has {len(group)} elements, expected 24")
    return tuple(group.values())


def single_qubit_cliffords() -> list[np.ndarray]:
    """The 24 single-qubit Cliffords modulo global phase, generated by H and S."""
    return [m.copy() for m in _clifford_tuple()]


def clifford_twirl_sum(p1: str, p2: str, rho: np.ndarray) -> np.ndarray:
    """``sum_C C^dag P1 C rho C^dag P2 C`` over the single-qubit Clifford group."""
    a, b = PAULIS[p1], PAULIS[p2]
    total = np.zeros((2, 2), dtype=complex)
    for c in _clifford_tuple():
        cd = c.conj().T
        total += cd @ a @ c @ rho @ cd @ b @ c
    return total


def clifford_twirl_check(p1: str, p2: str, rho: np.ndarray, tol: float = 1e-10) -> bool:
    if p1 not in PAULIS or p2 not in PAULIS:
        raise ValueError(f"Pauli labels must be among {sorted(PAULIS)}")
    if p1 == p2:
        raise ValueError("the twirl cross term only vanishes for distinct Paulis")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2) or not np.allclose(rho, rho.conj().T, atol=1e-12) \
            or abs(np.trace(rho) - 1) > 1e-12:
        raise ValueError("rho must be a 2x2 Hermitian matrix with unit trace")
    return bool(np.max(np.abs(clifford_twirl_sum(p1, p2, rho))) <= tol)
