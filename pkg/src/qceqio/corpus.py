"""Generators for the bundled benchmark circuits.

Small stand-ins for the usual reversible-arithmetic and algorithm
benchmarks (Toffoli ladders, QFT, Draper adder, layered Hadamard, HSP,
a Grover oracle, GF(4) multiplication). ``bundled_circuits()`` reads the
``.qcx`` files shipped in ``qceqio/data/benchmarks``; ``build_corpus()``
regenerates them.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .circuit import Circuit, Gate, parse_circuit, serialize_circuit

__all__ = [
    "toffoli_clifford_t",
    "qft",
    "draper_adder",
    "layered_hadamard",
    "layered_qft",
    "hsp",
    "grover_oracle",
    "gf4_mult",
    "toff_ladder",
    "build_corpus",
    "write_corpus",
    "bundled_circuits",
]


def toffoli_clifford_t(a: int, b: int, c: int) -> list[Gate]:
    """Toffoli (controls a, b; target c) as 15 Clifford+T gates, 7 of them T-like."""
    G = Gate
    return [
        G("H", (c,)),
        G("CX", (b, c)), G("TDG", (c,)), G("CX", (a, c)), G("T", (c,)),
        G("CX", (b, c)), G("TDG", (c,)), G("CX", (a, c)), G("T", (b,)), G("T", (c,)),
        G("H", (c,)),
        G("CX", (a, b)), G("T", (a,)), G("TDG", (b,)), G("CX", (a, b)),
    ]


def _toffoli(a, b, c, clifford_t: bool) -> list[Gate]:
    return toffoli_clifford_t(a, b, c) if clifford_t else [Gate("CCX", (a, b, c))]


def toff_ladder(n_controls: int, clifford_t: bool = True) -> Circuit:
    """Multi-controlled X from a compute / apply / uncompute ladder of Toffolis.

    Wires: controls ``0..c-1``, ancillas ``c..2c-3``, target ``2c-2``.
    """
    c = n_controls
    if c < 2:
        raise ValueError("need at least two controls")
    target = 2 * c - 2
    anc = list(range(c, target))
    compute = []
    carry = 0
    for i, a in enumerate(anc):
        compute.append((carry, i + 1, a))
        carry = a
    steps = compute + [(carry, c - 1, target)] + compute[::-1]
    gates = [g for s in steps for g in _toffoli(*s, clifford_t)]
    return Circuit(2 * c - 1, tuple(gates))


def qft(n: int, swaps: bool = True, offset: int = 0) -> list[Gate]:
    """QFT on wires ``offset..offset+n-1`` with wire ``offset`` most significant."""
    gates = []
    for i in range(n):
        gates.append(Gate("H", (offset + i,)))
        for j in range(i + 1, n):
            gates.append(Gate("CRK", (offset + j, offset + i), j - i + 1))
    if swaps:
        for i in range(n // 2):
            gates.append(Gate("SWAP", (offset + i, offset + n - 1 - i)))
    return gates


def _inverse_gates(gates):
    return [g.adjoint() for g in reversed(gates)]


def draper_adder(bits: int) -> Circuit:
    """``|a>|b> -> |a>|a + b mod 2^bits>``; a on wires ``0..bits-1``, b after."""
    n = bits
    fwd = qft(n, offset=n)
    phases = []
    for i in range(n):
        for j in range(n):
            if i + j >= n - 1:
                phases.append(Gate("CRK", (i, n + j), i + j - n + 2))
    return Circuit(2 * n, tuple(fwd + phases + _inverse_gates(fwd)))


def _random_toffolis(rng, n_wires, count, controls=None, targets=None):
    controls = list(range(n_wires)) if controls is None else list(controls)
    targets = list(range(n_wires)) if targets is None else list(targets)
    out = []
    while len(out) < count:
        t = targets[rng.integers(len(targets))]
        cs = [w for w in controls if w != t]
        a, b = (cs[i] for i in rng.choice(len(cs), size=2, replace=False))
        out.append(Gate("CCX", (a, b, t)))
    return out


def layered_hadamard(n: int, seed: int = 0) -> Circuit:
    """``n`` Hadamard layers, ``n`` random Toffolis, ``n`` Hadamard layers."""
    rng = np.random.default_rng(seed)
    layer = [Gate("H", (w,)) for w in range(n)]
    return Circuit(n, tuple(layer * n + _random_toffolis(rng, n, n) + layer * n))


def layered_qft(n: int, seed: int = 0) -> Circuit:
    rng = np.random.default_rng(seed)
    return Circuit(n, tuple(qft(n) + _random_toffolis(rng, n, n) + qft(n)))


def hsp(n_a: int, seed: int = 0) -> Circuit:
    """Hadamards on register a, ``n_a`` random Toffolis from a into b, QFT on a."""
    rng = np.random.default_rng(seed)
    n = 2 * n_a
    gates = [Gate("H", (w,)) for w in range(n_a)]
    gates += _random_toffolis(rng, n, n_a, controls=range(n_a), targets=range(n_a, n))
    gates += qft(n_a)
    return Circuit(n, tuple(gates))


def grover_oracle() -> Circuit:
    """Marks ``¬x1 ∧ x2 ∧ x3 ∧ ¬x4`` into wire 6 (ancillas 4, 5)."""
    flip = [Gate("X", (0,)), Gate("X", (3,))]
    ladder = [(0, 1, 4), (2, 4, 5), (3, 5, 6), (2, 4, 5), (0, 1, 4)]
    gates = flip + [g for s in ladder for g in _toffoli(*s, clifford_t=True)] + flip
    return Circuit(7, tuple(gates))


def gf4_mult() -> Circuit:
    """``c ^= a * b`` in GF(4) = GF(2)[x]/(x^2+x+1); a: 0,1  b: 2,3  c: 4,5 (low bit first)."""
    terms = [(0, 2, 4), (1, 3, 4), (0, 3, 5), (1, 2, 5), (1, 3, 5)]
    return Circuit(6, tuple(g for s in terms for g in _toffoli(*s, clifford_t=True)))


def build_corpus() -> dict[str, Circuit]:
    return {
        "toff_3": toff_ladder(3),
        "toff_4": toff_ladder(4),
        "qft_3": Circuit(3, tuple(qft(3))),
        "qft_4": Circuit(4, tuple(qft(4))),
        "draper_adder_2": draper_adder(2),
        "draper_adder_3": draper_adder(3),
        "layered_hadamard_4": layered_hadamard(4, seed=4),
        "layered_hadamard_6": layered_hadamard(6, seed=6),
        "layered_qft_4": layered_qft(4, seed=4),
        "hsp_6": hsp(3, seed=3),
        "grover_oracle_7": grover_oracle(),
        "gf4_mult": gf4_mult(),
    }


def write_corpus(directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, c in build_corpus().items():
        path = directory / f"{name}.qcx"
        path.write_text(serialize_circuit(c), encoding="utf-8")
        paths.append(path)
    return paths


def bundled_circuits() -> dict[str, Circuit]:
    """The shipped benchmark files, keyed by file stem, in name order."""
    root = resources.files("qceqio") / "data" / "benchmarks"
    out = {}
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".qcx"):
            out[entry.name[:-4]] = parse_circuit(entry.read_text(encoding="utf-8"))
    return out
