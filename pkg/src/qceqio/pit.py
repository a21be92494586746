"""Randomized identity testing of phase polynomials (Schwartz-Zippel).

Both polynomials are scaled by the common power of two ``2^K`` so their
coefficients become integers, then evaluated at random points of
``R^n`` inside the prime field ``GF(p)``. A nonzero polynomial of degree
``d`` vanishes at such a point with probability at most ``d / |R|``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .poly import PhasePoly

__all__ = ["PitConfig", "PitReport", "failure_bound", "scaled_integer_form", "disagrees_at",
           "pit_phase_equal"]

MERSENNE_61 = (1 << 61) - 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # deterministic Miller-Rabin witnesses for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PitConfig:
    field_modulus: int = MERSENNE_61
    r_size: int = 1 << 32
    trials: int = 8
    seed: int = 0
    ell: int = 1

    def __post_init__(self):
        if not _is_prime(self.field_modulus):
            raise ValueError(f"field modulus {self.field_modulus} is not prime")
        if self.field_modulus >= 1 << 64:
            raise ValueError("field modulus must fit in 64 bits")
        if not 2 <= self.r_size <= self.field_modulus:
            raise ValueError("need 2 <= r_size <= field_modulus")
        if self.trials < 1 or self.ell < 1:
            raise ValueError("trials and ell must be positive")


@dataclass(frozen=True)
class PitReport:
    accepted: bool
    witness: dict | None
    degree: int
    ell: int
    trial_bound: Fraction
    overall_bound: Fraction
    trials_run: int
    repeated_bound: Fraction = field(default=Fraction(0))

    @property
    def verdict(self) -> str:
        return "accept" if self.accepted else "reject"


def failure_bound(ell: int, d: int, r_size: int) -> Fraction:
    """``min(1, ell^2 * d / |R|)`` as an exact rational."""
    if ell < 0 or d < 0 or r_size <= 0:
        raise ValueError("ell, d must be non-negative and r_size positive")
    return min(Fraction(1), Fraction(ell * ell * d, r_size))


def scaled_integer_form(phi: PhasePoly, K: int) -> dict:
    """Coefficients of ``2^K * phi`` as integers in ``[0, 2^K)``."""
    out = {}
    for m, c in phi.terms.items():
        if c.denom_exp > K:
            raise ValueError(f"coefficient {c} needs more than 2^{K} precision")
        out[m] = c.numerator << (K - c.denom_exp)
    return out


def _eval_mod(poly: dict, point: dict, p: int) -> int:
    total = 0
    for m, c in poly.items():
        term = c
        for v in m:
            term = term * point[v] % p
        total += term
    return total % p


def disagrees_at(phi1: PhasePoly, phi2: PhasePoly, point: dict, modulus: int = MERSENNE_61) -> bool:
    """Whether the scaled integer forms differ at ``point`` (a variable -> value map) mod ``modulus``."""
    K = max(phi1.max_denom_exp(), phi2.max_denom_exp())
    return _eval_mod(scaled_integer_form(phi1, K), point, modulus) \
        != _eval_mod(scaled_integer_form(phi2, K), point, modulus)


def pit_phase_equal(phi1: PhasePoly, phi2: PhasePoly, cfg: PitConfig = PitConfig(),
                    variables: Iterable[int] | None = None) -> PitReport:
    """Test ``phi1 == phi2`` as polynomials by random evaluation.

    Trial ``t`` draws its point from a generator seeded with
    ``(cfg.seed, t)``, so a report depends only on its inputs.
    """
    used = phi1.variables() | phi2.variables()
    if variables is not None:
        universe = set(variables)
        extra = used - universe
        if extra:
            raise ValueError(f"variables {sorted(extra)} outside the declared universe")
    else:
        universe = used
    order = sorted(universe)
    K = max(phi1.max_denom_exp(), phi2.max_denom_exp())
    a = scaled_integer_form(phi1, K)
    b = scaled_integer_form(phi2, K)
    d = max(phi1.degree(), phi2.degree())
    p = cfg.field_modulus
    trial_bound = failure_bound(1, d, cfg.r_size)
    overall = failure_bound(cfg.ell, d, cfg.r_size)
    for t in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, t])
        vals = rng.integers(0, cfg.r_size, size=len(order), dtype=np.uint64).tolist()
        point = dict(zip(order, vals))
        if _eval_mod(a, point, p) != _eval_mod(b, point, p):
            return PitReport(False, point, d, cfg.ell, trial_bound, overall, t + 1, Fraction(0))
    return PitReport(True, None, d, cfg.ell, trial_bound, overall, cfg.trials,
                     overall ** cfg.trials)
