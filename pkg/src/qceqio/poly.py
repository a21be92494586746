"""Exact multilinear polynomial arithmetic for path sums.

Variables are plain integers. A monomial is a ``frozenset`` of variables
(multilinear, so ``v*v = v``); the empty monomial is the constant 1.

* :class:`DyadicPhase` -- a rational ``num / 2^k`` reduced modulo 1, i.e. a
  phase measured in full turns.
* :class:`BoolPoly` -- algebraic normal form over GF(2): an XOR of AND
  monomials, stored as the set of monomials present.
* :class:`PhasePoly` -- a sum of monomials with dyadic coefficients mod 1.

Coefficients mod 1 of a multilinear polynomial determine its values on
Boolean points mod 1 and vice versa (Moebius inversion over {0,1}^n maps
integer-valued functions to integer coefficients), so the stored form is
canonical and ``==`` is semantic equality.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

__all__ = [
    "Monomial",
    "ONE",
    "DyadicPhase",
    "BoolPoly",
    "PhasePoly",
    "lift_bool",
    "monomial_key",
]

Monomial = frozenset
ONE: frozenset = frozenset()


def monomial_key(m: frozenset):
    """Canonical sort key: by degree, then by sorted variables."""
    return (len(m), sorted(m))


def _trailing_zeros(v: int) -> int:
    return (v & -v).bit_length() - 1


class DyadicPhase:
    """``numerator / 2^denom_exp`` modulo 1, in lowest terms.

    Normal form: ``0 <= numerator < 2^denom_exp`` and the numerator is odd,
    except for zero which is ``0 / 2^0``.
    """

    __slots__ = ("numerator", "denom_exp")

    def __init__(self, numerator: int = 0, denom_exp: int = 0):
        if denom_exp < 0:
            raise ValueError("denom_exp must be non-negative")
        num = numerator % (1 << denom_exp)
        if num == 0:
            denom_exp = 0
        else:
            tz = _trailing_zeros(num)
            if tz:
                num >>= tz
                denom_exp -= tz
        self.numerator = num
        self.denom_exp = denom_exp

    @classmethod
    def from_fraction(cls, value) -> DyadicPhase:
        f = Fraction(value)
        d = f.denominator
        if d & (d - 1):
            raise ValueError(f"{value} is not dyadic")
        return cls(f.numerator, d.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.denom_exp)

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __bool__(self):
        return self.numerator != 0

    def __add__(self, other: DyadicPhase) -> DyadicPhase:
        if not isinstance(other, DyadicPhase):
            return NotImplemented
        k = max(self.denom_exp, other.denom_exp)
        return DyadicPhase((self.numerator << (k - self.denom_exp))
                           + (other.numerator << (k - other.denom_exp)), k)

    def __neg__(self) -> DyadicPhase:
        return DyadicPhase(-self.numerator, self.denom_exp)

    def __sub__(self, other: DyadicPhase) -> DyadicPhase:
        return self + (-other)

    def __mul__(self, n: int) -> DyadicPhase:
        if not isinstance(n, int):
            return NotImplemented
        return DyadicPhase(self.numerator * n, self.denom_exp)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, DyadicPhase):
            return self.numerator == other.numerator and self.denom_exp == other.denom_exp
        return NotImplemented

    def __hash__(self):
        return hash((self.numerator, self.denom_exp))

    def __repr__(self):
        return f"DyadicPhase({self.numerator}, {self.denom_exp})"

    def __str__(self):
        if self.numerator == 0:
            return "0"
        return f"{self.numerator}/2^{self.denom_exp}"


class BoolPoly:
    """Boolean polynomial in algebraic normal form."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[frozenset] = ()):
        self.terms = terms if isinstance(terms, frozenset) else frozenset(terms)
        self._hash = None

    @classmethod
    def var(cls, v: int) -> BoolPoly:
        return cls(frozenset((frozenset((v,)),)))

    @classmethod
    def const(cls, bit: int) -> BoolPoly:
        return cls(frozenset((ONE,))) if bit & 1 else cls()

    @classmethod
    def from_xor(cls, monomials: Iterable[frozenset]) -> BoolPoly:
        """XOR of monomials, where repeats cancel."""
        acc: set = set()
        for m in monomials:
            acc ^= {m}
        return cls(frozenset(acc))

    def __xor__(self, other: BoolPoly) -> BoolPoly:
        return BoolPoly(self.terms ^ other.terms)

    __add__ = __xor__

    def __and__(self, other: BoolPoly) -> BoolPoly:
        acc: set = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {a | b}
        return BoolPoly(frozenset(acc))

    __mul__ = __and__

    def __eq__(self, other):
        if isinstance(other, BoolPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_var(self, v: int) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms)) == frozenset((v,))

    def variables(self) -> set:
        out: set = set()
        for m in self.terms:
            out |= m
        return out

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def sorted_terms(self) -> list:
        return sorted(self.terms, key=monomial_key)

    def evaluate(self, value: Callable[[int], int] | Mapping[int, int]) -> int:
        get = value.__getitem__ if isinstance(value, Mapping) else value
        bit = 0
        for m in self.terms:
            if all(get(v) for v in m):
                bit ^= 1
        return bit

    def substitute(self, mapping: Mapping[int, BoolPoly]) -> BoolPoly:
        """Replace each variable ``v`` in ``mapping`` by ``mapping[v]``."""
        acc: set = set()
        for m in self.terms:
            hit = m & mapping.keys()
            if not hit:
                acc ^= {m}
                continue
            part = {m - hit}
            for v in hit:
                nxt: set = set()
                for a in part:
                    for b in mapping[v].terms:
                        nxt ^= {a | b}
                part = nxt
                if not part:
                    break
            acc ^= part
        return BoolPoly(frozenset(acc))

    def rename(self, mapping: Mapping[int, int]) -> BoolPoly:
        return BoolPoly(frozenset(frozenset(mapping.get(v, v) for v in m) for m in self.terms))

    def render(self, name: Callable[[int], str]) -> str:
        if not self.terms:
            return "0"
        return " ⊕ ".join("·".join(name(v) for v in sorted(m)) if m else "1"
                          for m in self.sorted_terms())

    def __repr__(self):
        return f"BoolPoly({self.render(lambda v: f'v{v}')})"


def _int_add(acc: dict, mono: frozenset, c: int) -> None:
    v = acc.get(mono, 0) + c
    if v:
        acc[mono] = v
    else:
        acc.pop(mono, None)


def _int_reduce(poly: dict, modulus: int | None) -> dict:
    if modulus is None:
        return {m: c for m, c in poly.items() if c}
    out = {}
    for m, c in poly.items():
        c %= modulus
        if c:
            out[m] = c
    return out


def _int_mul(a: dict, b: dict, modulus: int | None) -> dict:
    acc: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            _int_add(acc, ma | mb, ca * cb)
    return _int_reduce(acc, modulus)


def lift_bool(b: BoolPoly, modulus_exp: int | None = None) -> dict:
    """Arithmetize XOR: an integer polynomial equal to ``b`` on every 0/1 point.

    Folds ``L(a ⊕ t) = L(a) + t - 2 L(a) t`` left to right over the
    canonical term order. With ``modulus_exp = e`` the coefficients are kept
    modulo ``2^e``, which is all a phase coefficient ``num / 2^e`` can see.
    Returns ``{monomial: int}``.
    """
    modulus = None if modulus_exp is None else 1 << modulus_exp
    if modulus == 1:
        return {}
    acc: dict = {}
    for t in b.sorted_terms():
        nxt = dict(acc)
        _int_add(nxt, t, 1)
        for m, c in acc.items():
            _int_add(nxt, m | t, -2 * c)
        acc = _int_reduce(nxt, modulus)
    return acc


class PhasePoly:
    """Multilinear polynomial with :class:`DyadicPhase` coefficients (turns mod 1)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[frozenset, DyadicPhase] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c.numerator}

    @classmethod
    def _wrap(cls, terms: dict) -> PhasePoly:
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def term(cls, coeff, *variables: int) -> PhasePoly:
        if not isinstance(coeff, DyadicPhase):
            coeff = DyadicPhase.from_fraction(coeff)
        return cls({frozenset(variables): coeff})

    def __add__(self, other: PhasePoly) -> PhasePoly:
        out = dict(self.terms)
        for m, c in other.terms.items():
            _phase_add(out, m, c)
        return PhasePoly._wrap(out)

    def __neg__(self) -> PhasePoly:
        return PhasePoly._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: PhasePoly) -> PhasePoly:
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, PhasePoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def constant(self) -> DyadicPhase:
        return self.terms.get(ONE, DyadicPhase())

    def nonconstant(self) -> PhasePoly:
        return PhasePoly._wrap({m: c for m, c in self.terms.items() if m})

    def variables(self) -> set:
        out: set = set()
        for m in self.terms:
            out |= m
        return out

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def max_denom_exp(self) -> int:
        return max((c.denom_exp for c in self.terms.values()), default=0)

    def sorted_items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0]))

    def evaluate(self, value: Callable[[int], int] | Mapping[int, int]) -> Fraction:
        get = value.__getitem__ if isinstance(value, Mapping) else value
        total = DyadicPhase()
        for m, c in self.terms.items():
            if all(get(v) for v in m):
                total = total + c
        return total.as_fraction()

    def substitute(self, mapping: Mapping[int, BoolPoly]) -> PhasePoly:
        """Replace variables by Boolean polynomials, lifted to integers.

        Each coefficient ``num/2^k`` multiplies a product of lifts taken
        modulo ``2^k``; higher-order lift terms are whole turns and vanish.
        """
        out: dict = {}
        lifts: dict = {}
        for m, c in self.terms.items():
            hit = m & mapping.keys()
            if not hit:
                _phase_add(out, m, c)
                continue
            k = c.denom_exp
            prod = {m - hit: 1}
            for v in sorted(hit):
                key = (v, k)
                if key not in lifts:
                    lifts[key] = lift_bool(mapping[v], k)
                prod = _int_mul(prod, lifts[key], 1 << k)
                if not prod:
                    break
            for mm, ic in prod.items():
                _phase_add(out, mm, DyadicPhase(c.numerator * ic, k))
        return PhasePoly._wrap(out)

    def rename(self, mapping: Mapping[int, int]) -> PhasePoly:
        out: dict = {}
        for m, c in self.terms.items():
            _phase_add(out, frozenset(mapping.get(v, v) for v in m), c)
        return PhasePoly._wrap(out)

    def render(self, name: Callable[[int], str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_items():
            parts.append("·".join([str(c)] + [name(v) for v in sorted(m)]))
        return " + ".join(parts)

    def __repr__(self):
        return f"PhasePoly({self.render(lambda v: f'v{v}')})"


def _phase_add(acc: dict, mono: frozenset, c: DyadicPhase) -> None:
    prev = acc.get(mono)
    if prev is not None:
        c = prev + c
    if c.numerator:
        acc[mono] = c
    elif prev is not None:
        del acc[mono]
