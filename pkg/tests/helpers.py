"""Random circuit pairs with a known relationship, for oracle comparisons."""
from qceqio.circuit import Circuit, Gate, mutate, random_circuit
from qceqio.corpus import toffoli_clifford_t


def _rewrite(g: Gate, rng) -> list[Gate]:
    """An equivalent (up to global phase) replacement for one gate."""
    w = g.wires
    if g.kind == "S":
        return [Gate("T", w), Gate("T", w)]
    if g.kind == "Z":
        return [Gate("S", w), Gate("S", w)] if rng.random() < 0.5 else [Gate("H", w), Gate("X", w), Gate("H", w)]
    if g.kind == "X":
        return [Gate("H", w), Gate("Z", w), Gate("H", w)]
    if g.kind == "CZ":
        return [Gate("H", w[1:]), Gate("CX", w), Gate("H", w[1:])]
    if g.kind == "SWAP":
        a, b = w
        return [Gate("CX", (a, b)), Gate("CX", (b, a)), Gate("CX", (a, b))]
    if g.kind == "CCX":
        return toffoli_clifford_t(*w)
    if g.kind == "H" and rng.random() < 0.5:
        # (HS)^3 is a global phase
        return [g] + [Gate("H", w), Gate("S", w)] * 3
    return [g]


def equivalent_variant(c: Circuit, rng) -> Circuit:
    out = []
    for g in c.gates:
        out.extend(_rewrite(g, rng))
        if rng.random() < 0.15:
            v = int(rng.integers(c.n_wires))
            out.extend([Gate("H", (v,)), Gate("H", (v,))] if rng.random() < 0.5 else [Gate("T", (v,))] * 8)
    return Circuit(c.n_wires, tuple(out))


def random_pair(rng, max_wires=5, max_gates=30):
    """``(c1, c2)``: equivalent variants, single-edit mutants, or unrelated circuits."""
    n = int(rng.integers(1, max_wires + 1))
    c = random_circuit(rng, n, int(rng.integers(0, max_gates // 2 + 1)))
    kind = rng.integers(3)
    if kind == 0:
        return c, equivalent_variant(c, rng)
    if kind == 1:
        return c, mutate(equivalent_variant(c, rng), int(rng.integers(2**31)))
    return c, random_circuit(rng, n, int(rng.integers(0, max_gates + 1)))
