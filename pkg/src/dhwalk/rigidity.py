"""Citable rigidity facts for 4-dimensional reduced spaces.

Rigidity of a pair (reduced space, family of forms) means: cohomologous
deformations can be homotoped to isotopies, and the symplectomorphisms inside
the identity diffeomorphism component form a path-connected group.  Those are
deep external theorems of four-dimensional symplectic topology, so this
module is a lookup table of cited facts, not a computation; nothing outside
the table is ever asserted.

Statuses are ordered: certification of a walk needs every regular interval to
be rigid, possibly via the homology-restricted symplectomorphism group.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .family import AffineClassFamily
from .lattice import (
    IntersectionLattice,
    exceptional_classes,
    ruling_classes,
)


class RigidityStatus(enum.Enum):
    RIGID = "rigid"
    RIGID_VIA_H_RESTRICTED_SYMP = "rigid_via_H_restricted_symp"
    NOT_RIGID = "not_rigid"
    UNKNOWN = "unknown"

    @property
    def certifies(self) -> bool:
        return self in (
            RigidityStatus.RIGID,
            RigidityStatus.RIGID_VIA_H_RESTRICTED_SYMP,
        )


@dataclass(frozen=True)
class RigidityFact:
    key: str
    status: RigidityStatus
    citation: str
    scope: str
    #: whether any two cohomologous forms on the space are known to be
    #: symplectomorphic.  Deliberately unused by certification: rigidity is
    #: not known to imply it, so the two are never conflated.
    cohomologous_forms_symplectomorphic: bool = False


# Citations point at the 4-dimensional symplectic topology literature the
# facts come from.  No uncited facts are admitted.
FACTS: tuple[RigidityFact, ...] = (
    RigidityFact(
        "plane",
        RigidityStatus.RIGID,
        "McDuff, From deformation to isotopy (rational surfaces); "
        "Gromov, Pseudo-holomorphic curves (Symp of the plane is connected)",
        "projective plane, any positive line area",
        cohomologous_forms_symplectomorphic=True,
    ),
    RigidityFact(
        "plane-one-blowup",
        RigidityStatus.RIGID,
        "McDuff, From deformation to isotopy; Gromov; Abreu-McDuff, "
        "Topology of symplectomorphism groups of rational ruled surfaces",
        "one-point blow-up of the plane, positive areas",
        cohomologous_forms_symplectomorphic=True,
    ),
    RigidityFact(
        "sphere-product",
        RigidityStatus.RIGID,
        "McDuff, From deformation to isotopy (rational ruled surfaces); "
        "Gromov (equal areas); Abreu-McDuff (unequal areas)",
        "product of two spheres, positive ruling areas",
        cohomologous_forms_symplectomorphic=True,
    ),
    RigidityFact(
        "small-blowup-distinct-areas",
        RigidityStatus.RIGID_VIA_H_RESTRICTED_SYMP,
        "McDuff, From deformation to isotopy; Lalonde-Pinsonnault; Pinsonnault; "
        "Evans, Symplectic mapping class groups (homology-acting-trivially "
        "symplectomorphisms are path connected, at most three blow-ups)",
        "plane with two or three blow-ups, pairwise distinct exceptional areas",
        cohomologous_forms_symplectomorphic=True,
    ),
    RigidityFact(
        "small-blowup-equal-areas",
        RigidityStatus.RIGID_VIA_H_RESTRICTED_SYMP,
        "Pinsonnault; Evans (symplectomorphisms permuting equal-area "
        "exceptional classes live in the connected identity component of the "
        "diffeomorphism group)",
        "plane with two or three blow-ups, some exceptional areas coincide",
        cohomologous_forms_symplectomorphic=True,
    ),
    RigidityFact(
        "monotone-five-blowup",
        RigidityStatus.NOT_RIGID,
        "Seidel, Lectures on four-dimensional Dehn twists (a Dehn twist is "
        "smoothly but not symplectically isotopic to the identity on the "
        "monotone five-point blow-up)",
        "five-point blow-up carrying the anticanonical (monotone) class",
        cohomologous_forms_symplectomorphic=True,
    ),
)

_FACTS_BY_KEY = {f.key: f for f in FACTS}


@dataclass(frozen=True)
class RigidityResult:
    status: RigidityStatus
    fact: Optional[RigidityFact]
    detail: str

    @property
    def citation(self) -> str:
        return self.fact.citation if self.fact else "none"


def _monotone_moment(family: AffineClassFamily) -> Optional[Fraction]:
    """Moment value at which the family hits a positive multiple of -K.

    Solves ``A + t B = s (-K)`` exactly as a linear system in (t, s),
    including the degenerate branches where the slope is zero or parallel to
    the canonical class; returns a witnessing t in the closed interval with
    s > 0, else None.
    """
    lat = family.lattice
    a = family.base.coeffs
    b = family.slope.coeffs
    m = tuple(-Fraction(kc) for kc in lat.canonical.coeffs)  # -K
    n = lat.rank
    interval = family.interval

    def verify(t: Fraction, s: Fraction) -> Optional[Fraction]:
        if s > 0 and interval.contains(t, closed=True):
            if all(a[r] + t * b[r] == s * m[r] for r in range(n)):
                return t
        return None

    # generic branch: two coordinates with independent (b, m) rows
    for i in range(n):
        for j in range(i + 1, n):
            det = b[i] * m[j] - b[j] * m[i]
            if det == 0:
                continue
            # t*b_i - s*m_i = -a_i ; t*b_j - s*m_j = -a_j
            t = (a[j] * m[i] - a[i] * m[j]) / det
            s = (a[j] * b[i] - a[i] * b[j]) / det
            return verify(t, s)
    # slope parallel to the canonical direction (or zero): s depends on t
    pivot = next((i for i in range(n) if m[i] != 0), None)
    if pivot is None:
        return None
    for t in (interval.midpoint, interval.lo, interval.hi):
        s = (a[pivot] + t * b[pivot]) / m[pivot]
        witness = verify(t, s)
        if witness is not None:
            return witness
    return None


def lookup(lattice: IntersectionLattice, family: AffineClassFamily) -> RigidityResult:
    """Look up the rigidity status of a reduced-space family.

    Pure in basis-independent data: any canonical-class-preserving change of
    coordinates gives the same answer.  Anything outside the table is
    ``UNKNOWN``; the table is never extrapolated.
    """
    mid = family.interval.midpoint

    if lattice.is_default:
        k = lattice.blowup_count
        line_area = family.area(lattice.basis(0), mid)
        exc = exceptional_classes(lattice)
        areas_now = [family.area(c, mid) for c in exc]
        if line_area <= 0 or any(x <= 0 for x in areas_now):
            return RigidityResult(
                RigidityStatus.UNKNOWN, None, "family leaves the symplectic cone"
            )
        if k == 0:
            return RigidityResult(RigidityStatus.RIGID, _FACTS_BY_KEY["plane"], "plane")
        if k == 1:
            return RigidityResult(
                RigidityStatus.RIGID, _FACTS_BY_KEY["plane-one-blowup"], "one blow-up"
            )
        if k in (2, 3):
            affines = [family.area_affine(c) for c in exc]
            if len(set(affines)) == len(affines):
                fact = _FACTS_BY_KEY["small-blowup-distinct-areas"]
                detail = f"{k} blow-ups, distinct exceptional areas"
            else:
                fact = _FACTS_BY_KEY["small-blowup-equal-areas"]
                detail = f"{k} blow-ups, coinciding exceptional areas"
            return RigidityResult(fact.status, fact, detail)
        if k == 5:
            t_mono = _monotone_moment(family)
            if t_mono is not None:
                fact = _FACTS_BY_KEY["monotone-five-blowup"]
                return RigidityResult(
                    fact.status,
                    fact,
                    f"family carries the monotone class at t = {t_mono}",
                )
        return RigidityResult(
            RigidityStatus.UNKNOWN, None, f"{k} blow-ups outside the certified tables"
        )

    if lattice.is_hyperbolic_plane:
        rulings = ruling_classes(lattice)
        if rulings and all(family.area(c, mid) > 0 for c in rulings):
            return RigidityResult(
                RigidityStatus.RIGID, _FACTS_BY_KEY["sphere-product"], "sphere product"
            )
        return RigidityResult(
            RigidityStatus.UNKNOWN, None, "degenerate ruling areas on a sphere product"
        )

    return RigidityResult(
        RigidityStatus.UNKNOWN, None, "reduced space outside the rigidity tables"
    )


@dataclass(frozen=True)
class Certification:
    level: str  # "certified" | "uncertified"
    statuses: tuple[RigidityResult, ...]
    reason: str

    @property
    def certified(self) -> bool:
        return self.level == "certified"


def certify(trace) -> Certification:
    """Minimum rigidity status over all regular intervals of a walk.

    Certified only when every interval is rigid (possibly via the restricted
    symplectomorphism group) and the walk did not start from declared
    extremal data taken at face value.
    """
    results = tuple(rec.rigidity for rec in trace.intervals)
    if trace.declared_extremum:
        return Certification(
            "uncertified", results, "extremal reduced data declared, taken at face value"
        )
    for rec, res in zip(trace.intervals, results):
        if not res.status.certifies:
            return Certification(
                "uncertified",
                results,
                f"interval {rec.interval} has rigidity status {res.status.value}: {res.detail}",
            )
    return Certification("certified", results, "all regular intervals rigid")


def citation_table() -> str:
    """Human-readable table of every admitted fact, for the CLI."""
    lines = ["rigidity facts (status | scope | citation)", "-" * 44]
    for fact in FACTS:
        lines.append(f"{fact.key}: {fact.status.value}")
        lines.append(f"    scope: {fact.scope}")
        lines.append(f"    cite:  {fact.citation}")
    return "\n".join(lines)
