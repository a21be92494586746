"""Identity-loop obfuscation of quantum implementations.

A quantum implementation is a pair (state preparation, main circuit).
Obfuscation extends both with ``lam`` flag wires, then ``ell`` times draws
a short gate sequence whose product is the identity (a *loop*), cuts it in
two, and places the halves so that they meet again with nothing touching
their wires in between:

* ``STATE_CIRCUIT_SPLIT`` -- head appended to the preparation circuit,
  tail inserted in ``main`` before the first gate touching the loop.
* ``IN_CIRCUIT_LOOP`` -- both halves inserted in ``main`` around an idle
  stretch of the loop's wires.

Every placement is identity-preserving by construction; the checker
re-verifies after the fact.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .circuit import (Circuit, Gate, concat, idle_intervals, insert_gates, inverse,
                      random_gate, tensor_extend)
from .pathsum import circuit_pathsum
from .reduce import is_identity, reduce

__all__ = [
    "Strategy",
    "QuantumImplementation",
    "SubpathDelta",
    "ObfuscationConfig",
    "default_loop_bound",
    "sample_loop",
    "split_loop",
    "obfuscate",
    "write_manifest",
]

FAMILIES = ("word_inverse", "phase_cycle", "involution_pair")


class Strategy(str, enum.Enum):
    STATE_CIRCUIT_SPLIT = "state-circuit-split"
    IN_CIRCUIT_LOOP = "in-circuit-loop"
    MIXED = "mixed"


@dataclass(frozen=True)
class QuantumImplementation:
    prep: Circuit
    main: Circuit
    data_wires: tuple[int, ...]
    flag_wires: tuple[int, ...] = ()
    manifest: tuple[dict, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "data_wires", tuple(self.data_wires))
        object.__setattr__(self, "flag_wires", tuple(self.flag_wires))
        if self.prep.n_wires != self.main.n_wires:
            raise ValueError("prep and main must act on the same wires")
        if set(self.data_wires) & set(self.flag_wires):
            raise ValueError("data and flag wires overlap")
        if any(not 0 <= w < self.main.n_wires for w in self.data_wires + self.flag_wires):
            raise ValueError("wire index out of range")

    @classmethod
    def from_circuit(cls, c: Circuit, prep: Circuit | None = None) -> QuantumImplementation:
        return cls(prep if prep is not None else Circuit(c.n_wires), c, tuple(range(c.n_wires)))

    @property
    def n_wires(self) -> int:
        return self.main.n_wires

    def composite(self) -> Circuit:
        return concat(self.prep, self.main)

    def extended(self, lam: int) -> QuantumImplementation:
        """``(prep ⊗ I, main ⊗ I)`` with ``lam`` fresh flag wires."""
        n = self.main.n_wires
        return QuantumImplementation(tensor_extend(self.prep, lam), tensor_extend(self.main, lam),
                                     self.data_wires, self.flag_wires + tuple(range(n, n + lam)))


@dataclass(frozen=True)
class SubpathDelta:
    gates: tuple[Gate, ...]
    split_index: int
    wires: frozenset
    family: str

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not 0 <= self.split_index <= len(self.gates):
            raise ValueError("split index outside the loop")

    def __len__(self):
        return len(self.gates)


def default_loop_bound(n: int) -> int:
    """``2 * ceil(log2 n) + 2``."""
    return 2 * math.ceil(math.log2(max(n, 1))) + 2


@dataclass(frozen=True)
class ObfuscationConfig:
    lam: int = 2
    ell: int = 8
    B: int | None = None
    split_ratio: float = 0.5
    strategy: Strategy = Strategy.MIXED
    seed: int = 0
    data_loop_prob: float = 0.25
    max_retries: int = 8

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.lam < 0 or self.ell < 0:
            raise ValueError("lam and ell must be non-negative")
        if self.B is not None and self.B < 2:
            raise ValueError("B must be at least 2")
        if not 0 <= self.split_ratio <= 1:
            raise ValueError("split_ratio must lie in [0, 1]")

    def loop_bound(self, n: int) -> int:
        return self.B if self.B is not None else default_loop_bound(n)


def _verify_loop(gates: Sequence[Gate], wires) -> None:
    order = sorted(wires)
    pos = {w: i for i, w in enumerate(order)}
    local = Circuit(len(order), tuple(Gate(g.kind, tuple(pos[w] for w in g.wires), g.k) for g in gates))
    if not is_identity(reduce(circuit_pathsum(local)), up_to_global_phase=True):
        raise AssertionError(f"sampled loop is not an identity: {[str(g) for g in gates]}")


def sample_loop(cfg: ObfuscationConfig, ctx: Circuit, seed: int,
                wires: Iterable[int] | None = None, n_data: int | None = None) -> SubpathDelta:
    """Draw one identity loop on (a subset of) ``wires`` of ``ctx``.

    Families, chosen uniformly among those that fit the size bound:
    a random word followed by its inverse; a cycle of phase gates on one
    wire (``T^a T^(8-a)``, ``S S Z``, ``Z Z``); a self-inverse pair
    (``H H``, ``CX CX``, ``CZ CZ``).
    """
    cand = sorted(range(ctx.n_wires) if wires is None else set(wires))
    if not cand:
        raise ValueError("no wires to place a loop on")
    rng = np.random.default_rng(seed)
    bound = cfg.loop_bound(n_data if n_data is not None else ctx.n_wires)
    family = FAMILIES[rng.integers(len(FAMILIES))]
    if family == "word_inverse":
        k = int(rng.integers(1, min(3, len(cand)) + 1))
        chosen = [cand[i] for i in rng.choice(len(cand), size=k, replace=False)]
        length = int(rng.integers(1, bound // 2 + 1))
        word = tuple(random_gate(rng, chosen) for _ in range(length))
        gates = word + inverse(Circuit(ctx.n_wires, word)).gates
        split = len(word)
    elif family == "phase_cycle":
        w = cand[rng.integers(len(cand))]
        options = [("Z", "Z"), ("S", "S", "Z")]
        if bound >= 8:
            a = int(rng.integers(1, 8))
            options.append(("T",) * a + ("T",) * (8 - a))
        options = [o for o in options if len(o) <= bound]
        kinds = options[rng.integers(len(options))]
        gates = tuple(Gate(kind, (w,)) for kind in kinds)
        split = int(rng.integers(len(gates) + 1))
    else:
        pairs = [("H", 1)] + ([("CX", 2), ("CZ", 2)] if len(cand) >= 2 else [])
        kind, arity = pairs[rng.integers(len(pairs))]
        ws = tuple(cand[i] for i in rng.choice(len(cand), size=arity, replace=False))
        gates = (Gate(kind, ws), Gate(kind, ws))
        split = 1
    touched = frozenset(w for g in gates for w in g.wires)
    _verify_loop(gates, touched)
    return SubpathDelta(gates, split, touched, family)


def split_loop(d: SubpathDelta, ratio: float | None = 0.5) -> tuple[tuple[Gate, ...], tuple[Gate, ...]]:
    """Cut a loop into ``(head, tail)``; ``ratio=None`` uses the loop's own split point."""
    if ratio is None:
        cut = d.split_index
    else:
        if not 0 <= ratio <= 1:
            raise ValueError("ratio must lie in [0, 1]")
        cut = math.floor(ratio * len(d.gates) + 0.5)
    return d.gates[:cut], d.gates[cut:]


def _first_touch(c: Circuit, wires) -> int:
    for pos, g in enumerate(c.gates):
        if wires.intersection(g.wires):
            return pos
    return len(c.gates)


def _assert_idle(c: Circuit, start: int, stop: int, wires) -> None:
    for g in c.gates[start:stop]:
        if wires.intersection(g.wires):
            raise AssertionError(f"gate {g} inside a loop's idle window")


def obfuscate(impl: QuantumImplementation, cfg: ObfuscationConfig = ObfuscationConfig()) -> QuantumImplementation:
    """Insert ``cfg.ell`` split identity loops into ``impl`` extended by ``cfg.lam`` flags.

    The returned implementation carries a ``manifest``: one header record
    with the parameters, then one record per loop.
    """
    n_data = impl.main.n_wires
    ext = impl.extended(cfg.lam)
    prep, main = ext.prep, ext.main
    flags = list(ext.flag_wires)
    all_wires = list(range(ext.n_wires))
    bound = cfg.loop_bound(n_data)
    records: list[dict] = [{
        "lambda": cfg.lam, "ell": cfg.ell, "B": bound, "seed": cfg.seed,
        "strategy": cfg.strategy.value, "split_ratio": cfg.split_ratio,
    }]
    for it in range(cfg.ell):
        rng = np.random.default_rng([cfg.seed, it])
        strategy = cfg.strategy
        if strategy is Strategy.MIXED:
            strategy = (Strategy.STATE_CIRCUIT_SPLIT, Strategy.IN_CIRCUIT_LOOP)[rng.integers(2)]
        rec = {"iter": it, "strategy": strategy.value}
        if strategy is Strategy.STATE_CIRCUIT_SPLIT:
            on_data = not flags or rng.random() < cfg.data_loop_prob
            loop = sample_loop(cfg, main, int(rng.integers(2**63)),
                               wires=all_wires if on_data else flags, n_data=n_data)
            head, tail = split_loop(loop, cfg.split_ratio)
            limit = 0 if on_data else _first_touch(main, loop.wires)
            pos = int(rng.integers(limit + 1))
            rec["prep_pos"] = len(prep.gates)
            prep = Circuit(prep.n_wires, prep.gates + head)
            main = insert_gates(main, pos, tail)
            _assert_idle(main, 0, pos, loop.wires)
            rec["main_pos"] = pos
        else:
            loop = window = None
            pools = [all_wires] * cfg.max_retries + ([flags] if flags else [])
            for pool in pools:
                loop = sample_loop(cfg, main, int(rng.integers(2**63)), wires=pool, n_data=n_data)
                intervals = idle_intervals(main, loop.wires)
                if intervals:
                    a, b = intervals[rng.integers(len(intervals))]
                    p, q = sorted(int(v) for v in rng.integers(a, b + 1, size=2))
                    window = (p, q)
                    break
            if window is None:
                # every gate touches the loop: place the halves back to back
                p = q = int(rng.integers(len(main.gates) + 1))
                window = (p, q)
            head, tail = split_loop(loop, cfg.split_ratio)
            p, q = window
            main = insert_gates(main, q, tail)
            main = insert_gates(main, p, head)
            _assert_idle(main, p + len(head), q + len(head), loop.wires)
            rec["main_pos"] = [p, q + len(head)]
        rec.update(family=loop.family, wires=sorted(loop.wires), split_index=len(head),
                   size=len(loop), gates=[str(g) for g in loop.gates])
        records.append(rec)
    return QuantumImplementation(prep, main, ext.data_wires, ext.flag_wires, tuple(records))


def write_manifest(impl: QuantumImplementation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in impl.manifest:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
