"""Divisibility bounds for automorphism groups of smooth hypersurfaces.

``vector_bound`` bounds the order of the linear stabilizer of a form in
GL_{n+1}; ``projective_bound`` bounds the projective stabilizer of the
hypersurface in PGL_{n+1}.  In characteristic p both statements are about
the prime-to-p part of the order.  All arithmetic is exact; the rational
prefactors of the projective bound are carried as ``Fraction`` and the
result is checked to be integral.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm

from .errors import IntegralityViolation, InvalidInput
from .exactnum import prime_to_p_part


class Provenance(str, enum.Enum):
    VECTOR_GL = "VectorGL"
    PROJECTIVE_PGL = "ProjectivePGL"
    SPECIALIZED_CURVE = "SpecializedCurve"
    SPECIALIZED_SURFACE = "SpecializedSurface"
    SPECIALIZED_THREEFOLD = "SpecializedThreefold"


@dataclass(frozen=True)
class BoundValue:
    value: int
    provenance: Provenance


def _check(n: int, d: int):
    if not isinstance(n, int) or not isinstance(d, int):
        raise InvalidInput("n and d must be integers")
    if n < 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    if d <= 2:
        raise InvalidInput(f"the bounds need degree d > 2, got {d}")


def _factor(n: int, d: int, i: int) -> int:
    """(-1)^(n-i) + (d-1)^(n-i+1); positive whenever d >= 3."""
    v = (-1) ** (n - i) + (d - 1) ** (n - i + 1)
    assert v > 0, (n, d, i, v)
    return v


def vector_bound(n: int, d: int) -> int:
    """prod_{i=0}^{n} ((-1)^(n-i) + (d-1)^(n-i+1)) (d-1)^i."""
    _check(n, d)
    total = 1
    for i in range(n + 1):
        total *= _factor(n, d, i) * (d - 1) ** i
    return total


def projective_bound_exact(n: int, d: int) -> Fraction:
    """The projective bound as an exact rational, before the integrality check.

    ``C`` is read as the binomial coefficient (n+1 choose i).
    """
    _check(n, d)
    top = (n + 1) * (d - 1) ** n
    total = Fraction(1, n + 1)
    for i in range(n):
        c = comb(n + 1, i)
        total *= Fraction(_factor(n, d, i) * lcm(c * (d - 1) ** i, top), c)
    return total


def projective_bound(n: int, d: int) -> int:
    value = projective_bound_exact(n, d)
    if value.denominator != 1:
        raise IntegralityViolation(f"projective bound for n={n}, d={d} is {value}, not an integer")
    return value.numerator


def curve_bound(d: int) -> int:
    """d^2 (d-1)^4 (d^2-3d+3)(d-2), the plane-curve case."""
    _check(2, d)
    return d**2 * (d - 1) ** 4 * (d * d - 3 * d + 3) * (d - 2)


def surface_bound(d: int) -> int:
    _check(3, d)
    value = Fraction(
        d**3 * (d - 1) ** 8 * (d**3 - 4 * d**2 + 6 * d - 4) * (d * d - 3 * d + 3) * (d - 2)
        * lcm(3, 2 * (d - 1)),
        3,
    )
    if value.denominator != 1:
        raise IntegralityViolation(f"surface bound for d={d} is {value}")
    return value.numerator


def threefold_bound(d: int) -> int:
    _check(4, d)
    value = Fraction(
        d**4 * (d - 1) ** 13
        * (d**4 - 5 * d**3 + 10 * d**2 - 10 * d + 5)
        * (d**3 - 4 * d**2 + 6 * d - 4)
        * (d * d - 3 * d + 3)
        * (d - 2)
        * lcm(2, (d - 1) ** 2)
        * lcm(2, d - 1),
        4,
    )
    if value.denominator != 1:
        raise IntegralityViolation(f"threefold bound for d={d} is {value}")
    return value.numerator


SPECIALIZED = {"curve": (2, curve_bound), "surface": (3, surface_bound), "threefold": (4, threefold_bound)}


def specialized_bound(kind: str, d: int) -> BoundValue:
    try:
        _, fn = SPECIALIZED[kind]
    except KeyError:
        raise InvalidInput(f"unknown specialization {kind!r}; choose curve, surface or threefold") from None
    prov = {
        "curve": Provenance.SPECIALIZED_CURVE,
        "surface": Provenance.SPECIALIZED_SURFACE,
        "threefold": Provenance.SPECIALIZED_THREEFOLD,
    }[kind]
    return BoundValue(fn(d), prov)


def check_specializations(d_max_curve=30, d_max_other=20):
    """Yield (kind, d) pairs where the general formula and its specialization disagree."""
    for d in range(3, d_max_curve + 1):
        if projective_bound(2, d) != curve_bound(d):
            yield "curve", d
    for d in range(3, d_max_other + 1):
        if projective_bound(3, d) != surface_bound(d):
            yield "surface", d
        if projective_bound(4, d) != threefold_bound(d):
            yield "threefold", d


@dataclass(frozen=True)
class DivisibilityReport:
    observed_order: int
    p: int | None
    prime_to_p: int
    bound: int
    divides: bool
    quotient: int | None

    def as_dict(self):
        return {
            "observed_order": self.observed_order,
            "p": self.p,
            "prime_to_p_part": self.prime_to_p,
            "bound": self.bound,
            "divides": self.divides,
            "quotient": self.quotient,
        }


def divisibility_verdict(observed_order: int, p: int | None, bound: int) -> DivisibilityReport:
    """Does the prime-to-p part of ``observed_order`` divide ``bound``?"""
    if observed_order < 1:
        raise InvalidInput("observed order must be >= 1")
    part = observed_order if p is None else prime_to_p_part(observed_order, p)
    divides = bound % part == 0
    return DivisibilityReport(observed_order, p, part, bound, divides, bound // part if divides else None)
