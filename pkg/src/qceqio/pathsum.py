"""Sum-over-paths semantics.

A :class:`PathSum` stands for the operator

    |x>  ->  2^{-s/2} * sum_{y in {0,1}^m} e^{2 pi i phase(x, y)} |outputs(x, y)>

Input variable ``x_i`` is the integer ``i`` (``0 <= i < n_in``) and path
variable ``y_j`` is ``n_in + j``. Path variables are kept dense and in
creation order, so two path sums built the same way compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .poly import BoolPoly, DyadicPhase, PhasePoly

__all__ = [
    "EnumerationLimitError",
    "ENUMERATION_LIMIT",
    "PathSum",
    "identity_pathsum",
    "gate_pathsum",
    "compose",
    "circuit_pathsum",
    "evaluate_amplitude",
    "amplitude_matrix",
    "render_pathsum",
]

ENUMERATION_LIMIT = 24
_CHUNK = 1 << 16


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class PathSum:
    n_in: int
    m: int
    s: int
    phase: PhasePoly
    outputs: tuple[BoolPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if len(self.outputs) != self.n_in:
            raise ValueError("need one output polynomial per input")
        if self.s < 0 or self.m < 0:
            raise ValueError("m and s must be non-negative")

    def x(self, i: int) -> int:
        return i

    def y(self, j: int) -> int:
        return self.n_in + j

    def var_name(self, v: int) -> str:
        return f"x{v + 1}" if v < self.n_in else f"y{v - self.n_in + 1}"

    def size(self) -> int:
        """Number of stored terms (phase monomials plus output monomials)."""
        return len(self.phase) + sum(len(f) for f in self.outputs)

    def check_variables(self) -> None:
        used = self.phase.variables()
        for f in self.outputs:
            used |= f.variables()
        bad = [v for v in used if not 0 <= v < self.n_in + self.m]
        if bad:
            raise ValueError(f"variables {sorted(bad)} outside x1..x{self.n_in}, y1..y{self.m}")

    def __str__(self):
        return render_pathsum(self)


def identity_pathsum(n: int) -> PathSum:
    return PathSum(n, 0, 0, PhasePoly(), tuple(BoolPoly.var(i) for i in range(n)))


def _gate_phase(g: Gate) -> DyadicPhase:
    kind = g.kind
    if kind in ("Z", "CZ", "CCZ"):
        return DyadicPhase(1, 1)
    if kind == "S":
        return DyadicPhase(1, 2)
    if kind == "SDG":
        return DyadicPhase(3, 2)
    if kind == "T":
        return DyadicPhase(1, 3)
    if kind == "TDG":
        return DyadicPhase(7, 3)
    return DyadicPhase(1 if g.k > 0 else -1, abs(g.k))


def gate_pathsum(g: Gate, n_wires: int) -> PathSum:
    if any(w >= n_wires for w in g.wires):
        raise ValueError(f"{g} does not fit on {n_wires} wires")
    outs = [BoolPoly.var(i) for i in range(n_wires)]
    phase = PhasePoly()
    m = s = 0
    w = g.wires
    kind = g.kind
    if kind == "X":
        outs[w[0]] = BoolPoly.var(w[0]) ^ BoolPoly.const(1)
    elif kind == "H":
        y = n_wires
        phase = PhasePoly.term(DyadicPhase(1, 1), w[0], y)
        outs[w[0]] = BoolPoly.var(y)
        m = s = 1
    elif kind in ("Z", "S", "SDG", "T", "TDG", "RK", "CZ", "CRK", "CCZ"):
        phase = PhasePoly.term(_gate_phase(g), *w)
    elif kind in ("CX", "CCX"):
        ctrl = BoolPoly(frozenset((frozenset(w[:-1]),)))
        outs[w[-1]] = BoolPoly.var(w[-1]) ^ ctrl
    elif kind == "SWAP":
        a, b = w
        outs[a], outs[b] = outs[b], outs[a]
    else:  # pragma: no cover
        raise ValueError(f"unsupported gate {kind}")
    return PathSum(n_wires, m, s, phase, tuple(outs))


def compose(first: PathSum, second: PathSum) -> PathSum:
    """The path sum of ``second`` applied after ``first``.

    Inputs of ``second`` are replaced by the outputs of ``first``; the path
    variables of ``second`` are appended after those of ``first``.
    """
    if first.n_in != second.n_in:
        raise ValueError(f"arity mismatch: {first.n_in} vs {second.n_in}")
    n = first.n_in
    shift = first.m
    mapping = {i: first.outputs[i] for i in range(n)}
    for j in range(second.m):
        mapping[n + j] = BoolPoly.var(n + shift + j)
    outs = []
    for i, f in enumerate(second.outputs):
        if f.is_var(i):
            outs.append(first.outputs[i])
        else:
            outs.append(f.substitute(mapping))
    phase = first.phase + second.phase.substitute(mapping) if second.phase else first.phase
    return PathSum(n, first.m + second.m, first.s + second.s, phase, tuple(outs))


def circuit_pathsum(c: Circuit) -> PathSum:
    p = identity_pathsum(c.n_wires)
    for g in c.gates:
        p = compose(p, gate_pathsum(g, c.n_wires))
    return p


def _bits(v: np.ndarray, width: int) -> np.ndarray:
    """Rows of ``width`` bits for the integers in ``v``, most significant first."""
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((v[:, None] >> shifts) & 1).astype(bool)


def _evaluate_rows(p: PathSum, cols: np.ndarray):
    """Phase (as ints mod 2^K) and output indices for each row of variable values."""
    K = p.phase.max_denom_exp()
    if K > 62:
        raise EnumerationLimitError(f"phase precision 2^-{K} exceeds 64-bit evaluation")
    mod = 1 << K
    rows = cols.shape[0]
    acc = np.zeros(rows, dtype=np.int64)
    for mono, c in p.phase.terms.items():
        scaled = c.numerator << (K - c.denom_exp)
        if mono:
            mask = np.logical_and.reduce([cols[:, v] for v in mono])
            acc = (acc + scaled * mask) % mod
        else:
            acc = (acc + scaled) % mod
    out_idx = np.zeros(rows, dtype=np.int64)
    for f in p.outputs:
        bit = np.zeros(rows, dtype=bool)
        for mono in f.terms:
            if mono:
                bit ^= np.logical_and.reduce([cols[:, v] for v in mono])
            else:
                bit ^= True
        out_idx = (out_idx << 1) | bit
    return acc, K, out_idx


def _as_bits(x, n: int) -> list[int]:
    if isinstance(x, (int, np.integer)):
        x = format(int(x), f"0{n}b") if n else ""
    bits = [int(b) for b in x]
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise ValueError(f"expected {n} bits, got {x!r}")
    return bits


def evaluate_amplitude(p: PathSum, x, z, limit: int = ENUMERATION_LIMIT) -> complex:
    """``<z| P |x>`` by enumerating every path assignment ``y``."""
    if p.m > limit:
        raise EnumerationLimitError(f"{p.m} path variables exceeds the limit of {limit}")
    n = p.n_in
    xb = _as_bits(x, n)
    zi = int("".join(map(str, _as_bits(z, n))) or "0", 2)
    counts: dict[int, int] = {}
    K = p.phase.max_denom_exp()
    for start in range(0, 1 << p.m, _CHUNK):
        ys = np.arange(start, min(start + _CHUNK, 1 << p.m), dtype=np.int64)
        cols = np.empty((ys.size, n + p.m), dtype=bool)
        cols[:, :n] = xb
        cols[:, n:] = _bits(ys, p.m)
        ph, K, out = _evaluate_rows(p, cols)
        vals, cnt = np.unique(ph[out == zi], return_counts=True)
        for r, c in zip(vals.tolist(), cnt.tolist()):
            counts[r] = counts.get(r, 0) + c
    return _phase_sum(counts, K) * 2.0 ** (-p.s / 2)


def _phase_sum(counts: dict[int, int], K: int) -> complex:
    """``sum_r counts[r] * e^{2 pi i r / 2^K}`` with opposite phases cancelled in integers."""
    if K == 0:
        return complex(counts.get(0, 0))
    half = 1 << (K - 1)
    total = 0j
    for r in sorted(set(r % half for r in counts)):
        net = counts.get(r, 0) - counts.get(r + half, 0)
        if net:
            total += net * np.exp(2j * np.pi * r / (1 << K))
    return total


def amplitude_matrix(p: PathSum, limit: int = ENUMERATION_LIMIT) -> np.ndarray:
    """The full ``2^n x 2^n`` operator, column ``x`` holding ``P|x>``."""
    n = p.n_in
    if n + p.m > limit:
        raise EnumerationLimitError(f"{n + p.m} enumerated variables exceeds the limit of {limit}")
    dim = 1 << n
    mat = np.zeros((dim, dim), dtype=complex)
    total = 1 << (n + p.m)
    for start in range(0, total, _CHUNK):
        v = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        cols = _bits(v, n + p.m)
        ph, K, out = _evaluate_rows(p, cols)
        xi = v >> p.m
        np.add.at(mat, (out, xi), np.exp(2j * np.pi * ph / (1 << K)))
    return mat * 2.0 ** (-p.s / 2)


def render_pathsum(p: PathSum) -> str:
    lines = [f"in: {p.n_in}", f"paths: {p.m}", f"norm: {p.s}",
             f"phase: {p.phase.render(p.var_name)}"]
    for i, f in enumerate(p.outputs):
        lines.append(f"out_{i + 1}: {f.render(p.var_name)}")
    return "\n".join(lines) + "\n"
