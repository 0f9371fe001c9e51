"""Affine-in-t families of reduced cohomology classes.

Over an interval of regular moment values the reduced symplectic class moves
along an affine path ``[w(t)] = A + t*B``.  The slope ``B`` is pinned to the
Euler class of the reduction bundle by the single global sign convention of
this package:

    area-slope(C) = -pair(e, C)   for every class C,

equivalently ``B = -e``.  With the minimum normalised to 0 and the initial
bundle the Hopf fibration (Euler class the negative generator), this makes
the line-class area equal to ``t`` and the area of a fresh exceptional class
equal to ``t - wall``; growing areas, as they must be.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DimensionError, DomainError
from .formatting import fmt_affine, fmt_q, fmt_quadratic
from .lattice import (
    CERTIFIED_BLOWUP_LIMIT,
    IntersectionLattice,
    LatticeClass,
    exceptional_classes,
)

#: The one Euler-class evaluation convention used everywhere.
AREA_SLOPE_CONVENTION = "area-slope = -pairing(euler, class)"


@dataclass(frozen=True)
class Interval:
    """A rational interval of moment values, endpoints marked open/closed."""

    lo: Fraction
    hi: Fraction
    closed_lo: bool = False
    closed_hi: bool = False

    def __init__(self, lo, hi, closed_lo: bool = False, closed_hi: bool = False):
        object.__setattr__(self, "lo", Fraction(lo))
        object.__setattr__(self, "hi", Fraction(hi))
        object.__setattr__(self, "closed_lo", bool(closed_lo))
        object.__setattr__(self, "closed_hi", bool(closed_hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval ({lo}, {hi})")

    def contains(self, t, closed: bool = True) -> bool:
        """Membership test; ``closed=True`` admits the endpoints."""
        t = Fraction(t)
        if closed:
            return self.lo <= t <= self.hi
        lo_ok = t >= self.lo if self.closed_lo else t > self.lo
        hi_ok = t <= self.hi if self.closed_hi else t < self.hi
        return lo_ok and hi_ok

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __repr__(self) -> str:
        return f"({fmt_q(self.lo)},{fmt_q(self.hi)})"


@dataclass(frozen=True)
class QuadraticPolynomial:
    """``c0 + c1*t + c2*t^2`` with rational coefficients."""

    c0: Fraction
    c1: Fraction
    c2: Fraction

    def __init__(self, c0, c1, c2):
        object.__setattr__(self, "c0", Fraction(c0))
        object.__setattr__(self, "c1", Fraction(c1))
        object.__setattr__(self, "c2", Fraction(c2))

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        return self.c0 + self.c1 * t + self.c2 * t * t

    def integrate(self, lo, hi) -> Fraction:
        """Exact definite integral via the closed-form antiderivative."""
        lo, hi = Fraction(lo), Fraction(hi)

        def anti(t: Fraction) -> Fraction:
            return self.c0 * t + self.c1 * t * t / 2 + self.c2 * t * t * t / 3

        return anti(hi) - anti(lo)

    def __str__(self) -> str:
        return fmt_quadratic(self.c0, self.c1, self.c2)


@dataclass(frozen=True)
class EulerClass:
    """The Euler class of the reduction bundle, as an integral lattice class."""

    cls: LatticeClass
    convention: str = AREA_SLOPE_CONVENTION

    def __post_init__(self):
        if not self.cls.is_integral:
            raise ValueError("Euler class must be integral")
        if self.convention != AREA_SLOPE_CONVENTION:
            raise ValueError(f"unsupported Euler convention {self.convention!r}")

    def __neg__(self) -> "EulerClass":
        return EulerClass(-self.cls)


def slope_from_euler(e: EulerClass, lattice: IntersectionLattice) -> LatticeClass:
    """The unique slope B with pair(B, C) = -pair(e, C) for all C; B = -e."""
    if e.cls.rank != lattice.rank:
        raise DimensionError("Euler class rank does not match lattice rank")
    return -e.cls


def euler_from_slope(b: LatticeClass) -> EulerClass:
    return EulerClass(-b)


@dataclass(frozen=True)
class AffineClassFamily:
    """The reduced class ``A + t*B`` over an interval of regular values."""

    lattice: IntersectionLattice
    base: LatticeClass
    slope: LatticeClass
    interval: Interval

    def __post_init__(self):
        if self.base.rank != self.lattice.rank or self.slope.rank != self.lattice.rank:
            raise DimensionError("family classes must match the lattice rank")
        if not self.slope.is_integral:
            raise ValueError("family slope must be integral (it is minus an Euler class)")

    def class_at(self, t) -> LatticeClass:
        return self.base + Fraction(t) * self.slope

    def area_affine(self, c: LatticeClass) -> tuple[Fraction, Fraction]:
        """The affine area function of ``c`` as ``(constant, slope)``."""
        return self.lattice.pair(self.base, c), self.lattice.pair(self.slope, c)

    def area(self, c: LatticeClass, t) -> Fraction:
        """Symplectic area of ``c`` at moment value ``t`` (endpoints allowed)."""
        t = Fraction(t)
        if not self.interval.contains(t, closed=True):
            raise DomainError(f"moment value {fmt_q(t)} outside interval {self.interval}")
        const, slope = self.area_affine(c)
        return const + t * slope

    def area_text(self, c: LatticeClass) -> str:
        return fmt_affine(*self.area_affine(c))

    def with_interval(self, interval: Interval) -> "AffineClassFamily":
        return AffineClassFamily(self.lattice, self.base, self.slope, interval)

    def volume_poly(self) -> QuadraticPolynomial:
        """Half the self-pairing of the moving class, expanded in ``t``.

        This is the symplectic volume of the 4-dimensional reduced space, a
        quadratic with leading coefficient ``pair(B, B)/2``.
        """
        lat = self.lattice
        return QuadraticPolynomial(
            lat.pair(self.base, self.base) / 2,
            lat.pair(self.base, self.slope),
            lat.pair(self.slope, self.slope) / 2,
        )


@dataclass(frozen=True)
class ConeCheck:
    """Outcome of a symplectic-cone membership test.

    ``status`` is True/False on the certified default bases and ``None``
    ("unknown") elsewhere; a False carries the violating class.
    """

    status: Optional[bool]
    witness: Optional[LatticeClass]
    reason: str

    @property
    def failed(self) -> bool:
        return self.status is False


def symplectic_cone_check(family: AffineClassFamily, t) -> ConeCheck:
    """Positivity of the line area, every exceptional area, and the volume.

    Certified only on default bases with at most three blow-ups, where the
    exceptional-class enumeration is complete and positivity on that list is
    the Nakai-type criterion; elsewhere the check degrades to "unknown"
    rather than guessing.
    """
    t = Fraction(t)
    if not family.interval.contains(t, closed=True):
        raise DomainError(f"moment value {fmt_q(t)} outside interval {family.interval}")
    lat = family.lattice
    if not lat.is_default:
        return ConeCheck(None, None, "non-default basis")
    if lat.blowup_count > CERTIFIED_BLOWUP_LIMIT:
        return ConeCheck(None, None, f"more than {CERTIFIED_BLOWUP_LIMIT} blow-ups")
    line = lat.basis(0)
    if family.area(line, t) <= 0:
        return ConeCheck(False, line, "line area not positive")
    for c in exceptional_classes(lat):
        if family.area(c, t) <= 0:
            return ConeCheck(False, c, "exceptional area not positive")
    if family.volume_poly()(t) <= 0:
        return ConeCheck(False, None, "volume not positive")
    return ConeCheck(True, None, "ok")
