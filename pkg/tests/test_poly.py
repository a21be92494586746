import itertools
from fractions import Fraction

import pytest

from qceqio.poly import BoolPoly, DyadicPhase, PhasePoly, lift_bool


def test_dyadic_normal_form():
    assert DyadicPhase(2, 2) == DyadicPhase(1, 1)
    assert DyadicPhase(4, 2) == DyadicPhase(0, 0)
    assert DyadicPhase(-1, 3) == DyadicPhase(7, 3)
    assert str(DyadicPhase(6, 3)) == "3/2^2"
    assert DyadicPhase(1, 1) + DyadicPhase(1, 1) == DyadicPhase()
    assert DyadicPhase(1, 3) * 2 == DyadicPhase(1, 2)
    assert DyadicPhase.from_fraction(Fraction(5, 4)) == DyadicPhase(1, 2)
    with pytest.raises(ValueError):
        DyadicPhase.from_fraction(Fraction(1, 3))


def _random_bool(rng, nvars, nterms):
    monos = set()
    for _ in range(nterms):
        k = int(rng.integers(0, nvars + 1))
        monos ^= {frozenset(int(v) for v in rng.choice(nvars, size=k, replace=False))}
    return BoolPoly(monos)


def _points(n):
    for bits in itertools.product((0, 1), repeat=n):
        yield dict(enumerate(bits))


def test_boolpoly_algebra(rng):
    x, y = BoolPoly.var(0), BoolPoly.var(1)
    assert x ^ x == BoolPoly()
    assert (x & y) ^ x == x & (y ^ BoolPoly.const(1))
    for _ in range(50):
        a, b = _random_bool(rng, 4, 5), _random_bool(rng, 4, 5)
        for pt in _points(4):
            assert (a ^ b).evaluate(pt) == a.evaluate(pt) ^ b.evaluate(pt)
            assert (a & b).evaluate(pt) == a.evaluate(pt) & b.evaluate(pt)


def test_lift_exhaustive(rng):
    for _ in range(100):
        b = _random_bool(rng, 4, 6)
        lifted = lift_bool(b)
        for pt in _points(4):
            val = sum(c for m, c in lifted.items() if all(pt[v] for v in m))
            assert val == b.evaluate(pt)
        for e in (1, 2, 3):
            mod = lift_bool(b, e)
            for pt in _points(4):
                val = sum(c for m, c in mod.items() if all(pt[v] for v in m))
                assert val % (1 << e) == b.evaluate(pt)


def test_phase_substitute_congruent_mod_one(rng):
    for _ in range(100):
        phi = PhasePoly()
        for _ in range(4):
            k = int(rng.integers(1, 4))
            vars_ = rng.choice(3, size=int(rng.integers(1, 3)), replace=False)
            phi = phi + PhasePoly.term(DyadicPhase(int(rng.integers(1, 1 << k)), k), *map(int, vars_))
        mapping = {0: _random_bool(rng, 5, 3), 2: _random_bool(rng, 5, 3)}
        sub = phi.substitute(mapping)
        for pt in _points(5):
            inner = {0: mapping[0].evaluate(pt), 1: pt[1], 2: mapping[2].evaluate(pt)}
            assert sub.evaluate(pt) == phi.evaluate(inner)


def test_phase_canonical_equality():
    # 1/2 x + 1/2 y  ==  1/2 (x ⊕ y) + x y  as functions mod 1
    a = PhasePoly.term(Fraction(1, 2), 0) + PhasePoly.term(Fraction(1, 2), 1)
    b = PhasePoly.term(Fraction(1, 2), 0).substitute({0: BoolPoly.var(0) ^ BoolPoly.var(1)}) \
        + PhasePoly.term(Fraction(1, 1), 0, 1)
    assert a == b
    assert PhasePoly.term(Fraction(1, 2), 0) - PhasePoly.term(Fraction(1, 2), 0) == PhasePoly()


def test_phase_render_and_degree():
    phi = PhasePoly.term(Fraction(1, 2), 0, 1) + PhasePoly.term(Fraction(1, 8), 2)
    assert phi.degree() == 2 and phi.max_denom_exp() == 3
    assert phi.render(lambda v: f"v{v}") == "1/2^3·v2 + 1/2^1·v0·v1"
    assert phi.nonconstant() == phi
    assert (phi + PhasePoly.term(Fraction(1, 4))).constant() == DyadicPhase(1, 2)


def test_render_bool():
    b = BoolPoly.var(0) ^ (BoolPoly.var(1) & BoolPoly.var(2)) ^ BoolPoly.const(1)
    assert b.render(lambda v: f"x{v + 1}") == "1 ⊕ x1 ⊕ x2·x3"
    assert b.degree() == 2
