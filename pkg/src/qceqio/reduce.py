"""Path-sum rewriting and the circuit equivalence checker.

Three rewrite rules, each removing path variables while preserving the
operator (phases in turns, ``y`` a path variable absent from the outputs
and occurring in the phase only where shown):

* ``elim``  -- ``y`` appears nowhere: drop it, ``s -= 2``.
* ``hh``    -- phase is ``1/2 * y * (y' ⊕ P) + R`` with ``y'`` a path
  variable not in ``P``: the sum over ``y`` forces ``y' = P``. Substitute,
  drop ``y`` and ``y'``, ``s -= 2``.
* ``omega`` -- phase is ``±1/4 * y + 1/2 * y * P + R``: summing ``y`` gives
  ``sqrt(2) * e^{±2 pi i (1/8 - P/4)}``. Drop ``y``, ``s -= 1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circuit import Circuit, concat, inverse
from .pathsum import PathSum, circuit_pathsum
from .pit import PitConfig, PitReport, pit_phase_equal
from .poly import ONE, BoolPoly, DyadicPhase, PhasePoly, _phase_add, lift_bool, monomial_key
from .sim import STATE_WIRE_LIMIT, circuit_unitary, index_bits, simulate_state

__all__ = [
    "reduce",
    "reduce_step",
    "is_identity",
    "Verdict",
    "CheckResult",
    "CheckConfig",
    "check_equivalence",
]

_HALF = DyadicPhase(1, 1)
_QUARTER = DyadicPhase(1, 2)
_THREE_QUARTERS = DyadicPhase(3, 2)
_EIGHTH = DyadicPhase(1, 3)


class _Reducer:
    """Mutable working copy of a path sum for in-place rewriting."""

    def __init__(self, p: PathSum):
        self.n = p.n_in
        self.s = p.s
        self.phase = dict(p.phase.terms)
        self.outputs = list(p.outputs)
        self.alive = list(range(p.n_in, p.n_in + p.m))

    def _occurrences(self):
        occ: dict = {}
        n = self.n
        for mono in self.phase:
            for v in mono:
                if v >= n:
                    occ.setdefault(v, []).append(mono)
        in_out: set = set()
        for f in self.outputs:
            in_out |= f.variables()
        return occ, in_out

    def _substitute(self, var: int, poly: BoolPoly) -> None:
        mapping = {var: poly}
        hit = {m: c for m, c in self.phase.items() if var in m}
        for m in hit:
            del self.phase[m]
        for m, c in PhasePoly._wrap(hit).substitute(mapping).terms.items():
            _phase_add(self.phase, m, c)
        self.outputs = [f.substitute(mapping) if var in f.variables() else f for f in self.outputs]

    def _try_elim(self, occ, in_out):
        for v in self.alive:
            if v not in occ and v not in in_out:
                self.alive.remove(v)
                self.s -= 2
                return ("elim", v)
        return None

    def _try_hh(self, occ, in_out):
        alive = set(self.alive)
        for v in self.alive:
            if v in in_out or v not in occ:
                continue
            monos = occ[v]
            if any(self.phase[m] != _HALF for m in monos):
                continue
            q = BoolPoly.from_xor(m - {v} for m in monos)
            linear = None
            for u in sorted(alive & q.variables()):
                if frozenset((u,)) in q.terms and sum(1 for t in q.terms if u in t) == 1:
                    linear = u
                    break
            if linear is None:
                continue
            p = q ^ BoolPoly.var(linear)
            for m in monos:
                del self.phase[m]
            self._substitute(linear, p)
            self.alive.remove(v)
            self.alive.remove(linear)
            self.s -= 2
            return ("hh", v, linear)
        return None

    def _try_omega(self, occ, in_out):
        for v in self.alive:
            if v in in_out or v not in occ:
                continue
            single = frozenset((v,))
            lead = self.phase.get(single)
            if lead not in (_QUARTER, _THREE_QUARTERS):
                continue
            monos = occ[v]
            if any(self.phase[m] != _HALF for m in monos if m != single):
                continue
            p = BoolPoly.from_xor(m - {v} for m in monos if m != single)
            for m in monos:
                del self.phase[m]
            sign = 1 if lead == _QUARTER else -1
            _phase_add(self.phase, ONE, _EIGHTH * sign)
            for m, c in lift_bool(p, 2).items():
                _phase_add(self.phase, m, DyadicPhase(-sign * c, 2))
            self.alive.remove(v)
            self.s -= 1
            return ("omega", v)
        return None

    def step(self):
        occ, in_out = self._occurrences()
        return (self._try_elim(occ, in_out) or self._try_hh(occ, in_out)
                or self._try_omega(occ, in_out))

    def result(self) -> PathSum:
        rename = {v: self.n + j for j, v in enumerate(self.alive)}
        phase = PhasePoly._wrap(self.phase).rename(rename)
        outs = tuple(f.rename(rename) for f in self.outputs)
        return PathSum(self.n, len(self.alive), self.s, phase, outs)


def reduce_step(p: PathSum) -> tuple[tuple, PathSum] | None:
    """Apply the first applicable rule once; None at a normal form."""
    r = _Reducer(p)
    applied = r.step()
    if applied is None:
        return None
    return applied, r.result()


def reduce(p: PathSum) -> PathSum:
    """Rewrite to a fixpoint (rule priority elim > hh > omega, lowest variable first)."""
    r = _Reducer(p)
    while r.step() is not None:
        pass
    return r.result()


def is_identity(p: PathSum, up_to_global_phase: bool = True) -> bool:
    if p.m != 0 or p.s != 0:
        return False
    if any(not f.is_var(i) for i, f in enumerate(p.outputs)):
        return False
    if p.phase.nonconstant():
        return False
    return up_to_global_phase or p.phase.constant().is_zero()


class Verdict(str, enum.Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not-equivalent"
    PROBABLY_EQUIVALENT = "probably-equivalent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckResult:
    verdict: Verdict
    witness: tuple[str, str] | None = None
    failure_bound: Fraction | None = None
    reason: str = ""
    method: str = ""
    reduced: PathSum | None = field(default=None, compare=False, repr=False)
    pit: PitReport | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if (self.witness is not None) != (self.verdict is Verdict.NOT_EQUIVALENT):
            raise ValueError("a witness accompanies exactly the not-equivalent verdict")
        if (self.failure_bound is not None) != (self.verdict is Verdict.PROBABLY_EQUIVALENT):
            raise ValueError("a failure bound accompanies exactly the probably-equivalent verdict")

    @property
    def equivalent(self) -> bool:
        return self.verdict in (Verdict.EQUIVALENT, Verdict.PROBABLY_EQUIVALENT)

    def __str__(self):
        if self.verdict is Verdict.NOT_EQUIVALENT:
            x, z = self.witness
            return f"not-equivalent (witness: |{x}⟩→|{z}⟩)"
        if self.verdict is Verdict.PROBABLY_EQUIVALENT:
            return f"probably-equivalent (failure ≤ {float(self.failure_bound):.3g})"
        return self.verdict.value


@dataclass(frozen=True)
class CheckConfig:
    method: str = "auto"
    up_to_global_phase: bool = True
    pit: PitConfig = field(default_factory=PitConfig)
    brute_limit: int = 10
    witness_samples: int = 8
    seed: int = 0
    tol: float = 1e-9

    def __post_init__(self):
        if self.method not in ("auto", "reduce", "pit", "brute"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.brute_limit < 1 or self.witness_samples < 0:
            raise ValueError("limits must be positive")


def _minimal_point(poly_monomials, n: int) -> str:
    """A 0/1 input setting exactly the variables of an inclusion-minimal monomial."""
    mono = min(poly_monomials, key=monomial_key)
    return "".join("1" if i in mono else "0" for i in range(n))


def _decide_classical(red: PathSum, cfg: CheckConfig) -> CheckResult | None:
    """Verdict for a reduced miter without path variables, if one is available."""
    if red.m != 0 or red.s != 0:
        return None
    n = red.n_in
    for i, f in enumerate(red.outputs):
        diff = f ^ BoolPoly.var(i)
        if diff:
            x = _minimal_point(diff.terms, n)
            bits = {j: int(b) for j, b in enumerate(x)}
            z = "".join(str(g.evaluate(bits)) for g in red.outputs)
            return CheckResult(Verdict.NOT_EQUIVALENT, (x, z), reason="miter permutes basis states",
                               method="reduce", reduced=red)
    phi = red.phase.nonconstant() if cfg.up_to_global_phase else red.phase
    report = pit_phase_equal(phi, PhasePoly(), cfg.pit)
    if report.accepted:
        if not phi:
            return None
        return CheckResult(Verdict.PROBABLY_EQUIVALENT, failure_bound=report.repeated_bound,
                           reason="phase identity test accepted", method="pit", reduced=red,
                           pit=report)
    x = _minimal_point(phi.terms.keys(), n)
    return CheckResult(Verdict.NOT_EQUIVALENT, (x, x), reason="residual phase polynomial",
                       method="pit", reduced=red, pit=report)


def _first_difference(u: np.ndarray, v: np.ndarray, n: int, cfg: CheckConfig):
    """Lexicographically first (x, z) where ``u`` and ``gamma * v`` differ."""
    gamma = 1.0
    if cfg.up_to_global_phase:
        flat_u, flat_v = u.T.reshape(-1), v.T.reshape(-1)
        big = np.flatnonzero(np.abs(flat_u) > cfg.tol)
        if big.size and abs(flat_v[big[0]]) > cfg.tol:
            gamma = flat_u[big[0]] / flat_v[big[0]]
            gamma /= abs(gamma)
    bad = np.argwhere(np.abs(u - gamma * v).T > cfg.tol)
    if bad.size == 0:
        return None
    x, z = bad[0]
    return index_bits(int(x), n), index_bits(int(z), n)


def _brute(c1: Circuit, c2: Circuit, cfg: CheckConfig, red=None) -> CheckResult:
    u, v = circuit_unitary(c1), circuit_unitary(c2)
    w = _first_difference(u, v, c1.n_wires, cfg)
    if w is None:
        return CheckResult(Verdict.EQUIVALENT, reason="unitaries agree", method="brute", reduced=red)
    return CheckResult(Verdict.NOT_EQUIVALENT, w, reason="unitaries differ", method="brute",
                       reduced=red)


def _sampled_witness(c1: Circuit, c2: Circuit, cfg: CheckConfig, red=None) -> CheckResult | None:
    """Compare a few columns by simulation; returns a refutation or None."""
    n = c1.n_wires
    if n > STATE_WIRE_LIMIT or cfg.witness_samples == 0:
        return None
    rng = np.random.default_rng([cfg.seed, 0x5EED])
    inputs = [0] + [int(v) for v in rng.integers(0, 1 << n, size=cfg.witness_samples - 1)]
    gamma = None
    for x in inputs:
        a, b = simulate_state(c1, x), simulate_state(c2, x)
        if gamma is None:
            gamma = 1.0
            if cfg.up_to_global_phase:
                i = int(np.argmax(np.abs(a)))
                if abs(b[i]) > cfg.tol:
                    gamma = a[i] / b[i]
                    gamma /= abs(gamma)
        bad = np.flatnonzero(np.abs(a - gamma * b) > cfg.tol)
        if bad.size:
            return CheckResult(Verdict.NOT_EQUIVALENT, (index_bits(x, n), index_bits(int(bad[0]), n)),
                               reason="simulated columns differ", method="sample", reduced=red)
    return None


def check_equivalence(c1: Circuit, c2: Circuit, cfg: CheckConfig = CheckConfig()) -> CheckResult:
    """Decide whether ``c1`` and ``c2`` implement the same unitary.

    The miter ``c1`` followed by ``c2^-1`` is reduced as a path sum; an
    identity normal form proves equivalence. Otherwise (``auto``) a
    variable-free normal form is settled exactly or by the phase identity
    test, then a sampled simulation looks for a refuting column, then the
    full unitaries are compared when ``n <= brute_limit``.
    """
    if c1.n_wires != c2.n_wires:
        raise ValueError(f"wire-count mismatch: {c1.n_wires} vs {c2.n_wires}")
    if cfg.method == "brute":
        return _brute(c1, c2, cfg)
    red = reduce(circuit_pathsum(concat(c1, inverse(c2))))
    if is_identity(red, cfg.up_to_global_phase):
        return CheckResult(Verdict.EQUIVALENT, reason="miter reduces to identity", method="reduce",
                           reduced=red)
    decided = _decide_classical(red, cfg)
    if decided is not None:
        return decided
    if cfg.method in ("reduce", "pit"):
        return CheckResult(Verdict.INCONCLUSIVE, reason="stuck normal form", method=cfg.method,
                           reduced=red)
    refuted = _sampled_witness(c1, c2, cfg, red)
    if refuted is not None:
        return refuted
    if c1.n_wires <= cfg.brute_limit:
        return _brute(c1, c2, cfg, red)
    return CheckResult(Verdict.INCONCLUSIVE, reason=f"stuck normal form with {red.m} path variables",
                       method="auto", reduced=red)
