"""The wall-crossing walk engine.

A walk carries a triple (lattice, affine class family, Euler class) across
the moment interval.  On regular intervals the family is affine with slope
minus the Euler class; at a critical level the state changes by the
Guillemin-Sternberg surgery rules:

* index-2 point: the lattice gains an exceptional generator, the Euler class
  gains it too, and the new area function is ``t - wall``;
* coindex-2 point: an exceptional class whose area vanishes exactly at the
  wall blows down; the inverted bundle relation forces ``pair(e, C) = 1``
  before the crossing (asserted, never assumed), and the new Euler class is
  the pushforward of ``e + C``;
* codimension-4 surface: the lattice is unchanged and the Euler class shifts
  by the surface class (up at index 2, down at the declared coindex-2 form).

Walls are never trusted: a declared blow-down level must coincide exactly
with a root of an exceptional-area function, and every regular interval is
screened for interior roots, which operationalises the fact that critical
values are determined by the cohomology class of the form.

Everything is exact and deterministic; identical scenarios give
byte-identical traces.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .errors import (
    DimensionError,
    GluingError,
    InconsistentDataError,
    InternalInvariantError,
    PreconditionError,
    UnsupportedExtremumError,
    WallMismatchError,
    WalkError,
    EulerInconsistencyError,
)
from .family import (
    AffineClassFamily,
    EulerClass,
    Interval,
    QuadraticPolynomial,
    slope_from_euler,
    symplectic_cone_check,
)
from .formatting import fmt_q
from .lattice import (
    BlowDownMap,
    IntersectionLattice,
    LatticeClass,
    blow_down_data,
    blow_up_lattice,
    canonical_presentation,
    default_lattice,
    exceptional_classes,
    general_lattice,
    ruling_classes,
    _inverse,
    _mat_vec,
)
from .rigidity import RigidityResult, lookup
from .scenario import (
    ComponentKind,
    CriticalLevel,
    FixedComponent,
    FixedPointData,
    validate_structure,
)


# ---------------------------------------------------------------------------
# states and fingerprints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WalkState:
    """The reduced-space data over one interval of regular values."""

    lattice: IntersectionLattice
    family: AffineClassFamily
    euler: EulerClass

    def __post_init__(self):
        if self.family.lattice is not self.lattice and self.family.lattice != self.lattice:
            raise InternalInvariantError("family lattice differs from state lattice")
        if self.family.slope != slope_from_euler(self.euler, self.lattice):
            raise InternalInvariantError("family slope violates the Euler convention")

    @property
    def interval(self) -> Interval:
        return self.family.interval

    @property
    def k(self) -> int:
        """Rank minus one; the blow-up count on a default basis."""
        return self.lattice.rank - 1


@dataclass(frozen=True)
class Fingerprint:
    """Basis-independent snapshot of a state at one moment value.

    ``marked_areas`` pairs the area of every exceptional and ruling class
    with its Euler pairing, as a sorted multiset; together with the lattice
    type, canonical data and volume this is invariant under any
    canonical-class-preserving isometry of the coordinates.
    """

    lattice_type: tuple
    canonical_self: Fraction
    volume: Fraction
    marked_areas: tuple[tuple[Fraction, Fraction], ...]
    euler_self: Fraction
    euler_canonical: Fraction

    def with_negated_euler(self) -> "Fingerprint":
        return replace(
            self,
            marked_areas=tuple(sorted((a, -p) for a, p in self.marked_areas)),
            euler_canonical=-self.euler_canonical,
        )


def _lattice_type(lat: IntersectionLattice) -> tuple:
    return (lat.rank, "even" if lat.is_even else "odd", lat.signature)


def state_fingerprint(state: WalkState, t) -> Fingerprint:
    t = Fraction(t)
    lat, fam, e = state.lattice, state.family, state.euler.cls
    marked = sorted(
        (fam.area(c, t), lat.pair(e, c))
        for c in exceptional_classes(lat) + ruling_classes(lat)
    )
    return Fingerprint(
        _lattice_type(lat),
        lat.pair(lat.canonical, lat.canonical),
        fam.volume_poly()(t),
        tuple(marked),
        lat.pair(e, e),
        lat.pair(e, lat.canonical),
    )


@dataclass(frozen=True)
class IntervalRecord:
    """One regular interval of a trace with its volume and rigidity data."""

    state: WalkState
    volume: QuadraticPolynomial
    rigidity: RigidityResult

    @property
    def interval(self) -> Interval:
        return self.state.interval

    @property
    def lattice(self) -> IntersectionLattice:
        return self.state.lattice

    @property
    def family(self) -> AffineClassFamily:
        return self.state.family

    @property
    def euler(self) -> EulerClass:
        return self.state.euler

    @property
    def k(self) -> int:
        return self.state.k

    def fingerprint(self) -> tuple:
        lat, fam, e = self.lattice, self.family, self.euler.cls
        marked = sorted(
            (*fam.area_affine(c), lat.pair(e, c))
            for c in exceptional_classes(lat) + ruling_classes(lat)
        )
        vol = self.volume
        return (
            _lattice_type(lat),
            lat.pair(lat.canonical, lat.canonical),
            (vol.c0, vol.c1, vol.c2),
            tuple(marked),
            lat.pair(e, e),
            lat.pair(e, lat.canonical),
        )


@dataclass(frozen=True)
class CrossingAction:
    kind: str  # blow_up | blow_down | euler_shift_up | euler_shift_down
    class_name: str
    euler_pairing: Optional[Fraction] = None
    blow_down_map: Optional[BlowDownMap] = None


@dataclass(frozen=True)
class CrossingEvent:
    value: Fraction
    actions: tuple[CrossingAction, ...]
    fingerprint_before: Fingerprint
    fingerprint_after: Fingerprint


@dataclass(frozen=True)
class FinalCheck:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class FinalReport:
    value: Fraction
    checks: tuple[FinalCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        return [
            f"{'pass' if c.ok else 'FAIL'}: {c.name}" + (f" ({c.detail})" if c.detail else "")
            for c in self.checks
        ]


@dataclass(frozen=True)
class WalkTrace:
    """The full log of a walk: intervals, crossing events, final checks."""

    name: str
    intervals: tuple[IntervalRecord, ...]
    events: tuple[CrossingEvent, ...]
    final_report: Optional[FinalReport]
    declared_extremum: bool

    @property
    def initial_state(self) -> WalkState:
        return self.intervals[0].state

    @property
    def final_state(self) -> WalkState:
        return self.intervals[-1].state

    @property
    def k_sequence(self) -> tuple[int, ...]:
        return tuple(rec.k for rec in self.intervals)

    @property
    def walls(self) -> tuple[Fraction, ...]:
        return tuple(ev.value for ev in self.events)

    @property
    def moment_range(self) -> Interval:
        lo = self.intervals[0].interval.lo
        hi = self.final_report.value if self.final_report else self.intervals[-1].interval.hi
        return Interval(lo, hi)

    def fingerprints(self) -> tuple[tuple, ...]:
        return tuple(rec.fingerprint() for rec in self.intervals)

    def interval_containing(self, t) -> IntervalRecord:
        t = Fraction(t)
        for rec in self.intervals:
            if rec.interval.lo < t < rec.interval.hi:
                return rec
        raise PreconditionError(f"{fmt_q(t)} is not strictly inside a regular interval")

    def fingerprint_at(self, t) -> Fingerprint:
        return state_fingerprint(self.interval_containing(t).state, t)

    def volume_integral(self) -> Fraction:
        """Exact integral of the piecewise volume over the moment interval."""
        total = Fraction(0)
        for rec in self.intervals:
            total += rec.volume.integrate(rec.interval.lo, rec.interval.hi)
        return total


# ---------------------------------------------------------------------------
# crossing primitives (raw: no canonicalisation, no cone checks)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Raw:
    """State parts between actions inside one critical level."""

    lattice: IntersectionLattice
    base: LatticeClass
    euler_cls: LatticeClass


def _raw_of(state: WalkState) -> _Raw:
    return _Raw(state.lattice, state.family.base, state.euler.cls)


def _slope(raw: _Raw) -> LatticeClass:
    return -raw.euler_cls


def _vanishing_classes(raw: _Raw, lam: Fraction) -> list[LatticeClass]:
    """Exceptional classes whose area hits zero at the wall from above."""
    out = []
    slope = _slope(raw)
    for c in exceptional_classes(raw.lattice):
        const = raw.lattice.pair(raw.base, c)
        slp = raw.lattice.pair(slope, c)
        if const + lam * slp == 0 and slp < 0:
            out.append(c)
    return sorted(out, key=lambda c: c.coeffs)


def _blow_up_point(raw: _Raw, lam: Fraction):
    bum = blow_up_lattice(raw.lattice)
    e_new = bum.include(raw.euler_cls) + bum.new_class
    base_new = bum.include(raw.base) + lam * bum.new_class
    action = CrossingAction("blow_up", bum.upstairs.name_of(bum.new_class))
    return _Raw(bum.upstairs, base_new, e_new), action, bum


def _blow_down_point(raw: _Raw, lam: Fraction) -> tuple[_Raw, CrossingAction]:
    vanishing = _vanishing_classes(raw, lam)
    if not vanishing:
        raise WallMismatchError(
            "declared coindex-2 level, but no exceptional area vanishes here "
            "(critical values are forced by the class areas)",
            wall=lam,
        )
    c = vanishing[0]
    pairing = raw.lattice.pair(raw.euler_cls, c)
    if pairing != 1:
        raise EulerInconsistencyError(
            f"blow-down of {raw.lattice.name_of(c)} needs pair(e,C) = 1, got {fmt_q(pairing)}",
            wall=lam,
        )
    bdm = blow_down_data(raw.lattice, c)
    wall_class = raw.base + lam * _slope(raw)
    if raw.lattice.pair(wall_class, c) != 0:
        raise InternalInvariantError("wall class not orthogonal to the vanishing class")
    e_new = bdm.pushforward(raw.euler_cls + c)
    base_new = bdm.pushforward(wall_class) - lam * (-e_new)
    action = CrossingAction(
        "blow_down", raw.lattice.name_of(c), euler_pairing=pairing, blow_down_map=bdm
    )
    return _Raw(bdm.downstairs, base_new, e_new), action


def _shift_surface(
    raw: _Raw, lam: Fraction, f: LatticeClass, up: bool
) -> tuple[_Raw, CrossingAction]:
    if f.rank != raw.lattice.rank:
        raise DimensionError(
            f"surface class rank {f.rank} does not match the reduced space rank "
            f"{raw.lattice.rank} at {fmt_q(lam)}"
        )
    e_new = raw.euler_cls + f if up else raw.euler_cls - f
    base_new = raw.base + lam * (e_new - raw.euler_cls)
    kind = "euler_shift_up" if up else "euler_shift_down"
    return _Raw(raw.lattice, base_new, e_new), CrossingAction(kind, raw.lattice.name_of(f))


# ---------------------------------------------------------------------------
# level crossing with consistency screening
# ---------------------------------------------------------------------------


def _canonicalize(raw: _Raw) -> _Raw:
    change = canonical_presentation(raw.lattice)
    if change is None:
        return raw
    return _Raw(
        change.target,
        change.to_target(raw.base),
        change.to_target(raw.euler_cls),
    )


def _screen_interval(raw: _Raw, interval: Interval) -> WalkState:
    """Assemble the state over a regular interval and screen it.

    Raises when the family visibly leaves the symplectic cone at the interval
    midpoint or when some marked area has a root strictly inside the
    interval, which would be a wall the scenario failed to declare.
    """
    family = AffineClassFamily(raw.lattice, raw.base, _slope(raw), interval)
    state = WalkState(raw.lattice, family, EulerClass(raw.euler_cls))
    check = symplectic_cone_check(family, interval.midpoint)
    if check.failed:
        name = raw.lattice.name_of(check.witness) if check.witness else "volume"
        raise InconsistentDataError(
            f"symplectic cone violated on {interval}: {check.reason} ({name})",
            wall=interval.lo,
        )
    marked = list(exceptional_classes(raw.lattice))
    if raw.lattice.is_default:
        marked.append(raw.lattice.basis(0))
    for c in marked:
        const, slp = family.area_affine(c)
        if slp != 0:
            root = -const / slp
            if interval.lo < root < interval.hi:
                raise InconsistentDataError(
                    f"area of {raw.lattice.name_of(c)} vanishes at {fmt_q(root)} inside a "
                    "regular interval: an undeclared wall",
                    wall=interval.lo,
                )
    return state


def cross_level(
    state: WalkState, level: CriticalLevel, next_hi
) -> tuple[WalkState, CrossingEvent]:
    """Cross one critical level, simple or not.

    All coindex-2 actions run first (point blow-downs in ascending vanishing
    class order, then surface down-shifts), then all index-2 actions (point
    blow-ups, then surface up-shifts).  Declared surface classes are
    transported through the level's own blow-downs and blow-ups.  The
    resulting presentation is re-coordinated onto a canonical basis whenever
    a bounded search finds one.
    """
    lam = level.value
    if state.interval.hi != lam:
        raise PreconditionError(
            f"state interval {state.interval} does not end at the wall {fmt_q(lam)}"
        )
    fp_before = state_fingerprint(state, lam)
    raw = _raw_of(state)
    actions: list[CrossingAction] = []
    transported: dict[int, LatticeClass] = {}

    def transport_through(action: CrossingAction, blow_up_map=None) -> None:
        for key, cls_ in list(transported.items()):
            if action.kind == "blow_down":
                transported[key] = action.blow_down_map.pushforward(cls_)
            elif blow_up_map is not None:
                transported[key] = blow_up_map.include(cls_)

    surfaces_down: list[tuple] = []
    surfaces_up: list[tuple] = []
    points_down = 0
    points_up = 0
    for i, comp in enumerate(level.components):
        if comp.kind is ComponentKind.POINT:
            if comp.index == 4:
                points_down += 1
            elif comp.index == 2:
                points_up += 1
            else:
                raise WalkError(
                    f"cannot cross an interior point of index {comp.index}", wall=lam
                )
        elif comp.kind is ComponentKind.SURFACE:
            if comp.reduced_class is None:
                raise WalkError("surface component without a reduced class", wall=lam)
            transported[i] = comp.reduced_class
            (surfaces_down if comp.index == 4 else surfaces_up).append(i)
        else:
            raise WalkError("codimension-2 component at an interior level", wall=lam)

    for _ in range(points_down):
        raw, action = _blow_down_point(raw, lam)
        actions.append(action)
        transport_through(action)
    leftovers = _vanishing_classes(raw, lam)
    if leftovers:
        raise WallMismatchError(
            f"exceptional class {raw.lattice.name_of(leftovers[0])} vanishes here but "
            "no matching coindex-2 component is declared",
            wall=lam,
        )
    for i in sorted(surfaces_down, key=lambda i: transported[i].coeffs):
        raw, action = _shift_surface(raw, lam, transported[i], up=False)
        actions.append(action)
    for _ in range(points_up):
        raw, action, bum = _blow_up_point(raw, lam)
        actions.append(action)
        transport_through(action, blow_up_map=bum)
    for i in sorted(surfaces_up, key=lambda i: transported[i].coeffs):
        raw, action = _shift_surface(raw, lam, transported[i], up=True)
        actions.append(action)

    raw = _canonicalize(raw)
    new_state = _screen_interval(raw, Interval(lam, next_hi))
    fp_after = state_fingerprint(new_state, lam)
    event = CrossingEvent(lam, tuple(actions), fp_before, fp_after)
    return new_state, event


def cross_index2_point(state: WalkState, lam, next_hi) -> WalkState:
    """Blow up at an isolated index-2 point; the new area is ``t - lam``."""
    level = CriticalLevel(lam, [FixedComponent(ComponentKind.POINT, 2)])
    return cross_level(state, level, next_hi)[0]


def cross_coindex2_point(state: WalkState, lam, next_hi) -> WalkState:
    """Blow down the exceptional class whose area vanishes at the wall."""
    level = CriticalLevel(lam, [FixedComponent(ComponentKind.POINT, 4)])
    return cross_level(state, level, next_hi)[0]


def cross_surface(state: WalkState, lam, comp: FixedComponent, next_hi) -> WalkState:
    """Shift the Euler class by the surface class (sign from the index)."""
    level = CriticalLevel(lam, [comp])
    return cross_level(state, level, next_hi)[0]


def cross_non_simple(state: WalkState, lam, level: CriticalLevel, next_hi) -> WalkState:
    """Cross a level mixing index-2 and coindex-2 components."""
    if level.value != Fraction(lam):
        raise PreconditionError("level value does not match the wall")
    return cross_level(state, level, next_hi)[0]


# ---------------------------------------------------------------------------
# extremal levels
# ---------------------------------------------------------------------------


def init_from_minimum(data: FixedPointData) -> tuple[WalkState, bool]:
    """Initial state over the first regular interval.

    Isolated minimum: the reduction just above the bottom is the Hopf
    fibration over the plane, Euler class the negative line generator, line
    area ``t``.  A declared 4-dimensional minimum is taken at face value
    (second return value flags the trace as uncertified).  Codimension-4
    surface extrema are out of scope.
    """
    if len(data.levels) < 2:
        raise PreconditionError("scenario needs at least two levels")
    first = data.levels[0]
    next_hi = data.levels[1].value
    comp = first.components[0]
    if first.value != 0:
        raise PreconditionError("minimum critical value must be normalised to 0")
    if comp.kind is ComponentKind.POINT:
        lat = default_lattice(0)
        e = EulerClass(-lat.basis(0))
        raw = _Raw(lat, lat.cls(0), e.cls)
        return _screen_interval(raw, Interval(0, next_hi)), False
    if comp.kind is ComponentKind.FOURFOLD:
        labels = ("A", "B") if comp.gram == ((0, 1), (1, 0)) else None
        lat = general_lattice(comp.gram, comp.canonical, labels)
        if comp.euler_class is not None:
            e_cls = LatticeClass(comp.euler_class)
        else:
            e_cls = -(comp.normal_euler or 0) * lat.basis(0)
        if len(comp.areas or ()) != lat.rank:
            raise UnsupportedExtremumError(
                "declared areas do not match the declared lattice rank", wall=first.value
            )
        gram_inv = _inverse(lat.gram)
        base = LatticeClass(_mat_vec(gram_inv, [Fraction(a) for a in comp.areas]))
        raw = _Raw(lat, base, e_cls)
        return _screen_interval(raw, Interval(0, next_hi)), True
    raise UnsupportedExtremumError(
        "codimension-4 surface extremum: reduced spaces near it are sphere bundles, "
        "which this engine does not model",
        wall=first.value,
    )


def finalize_at_maximum(
    state: WalkState, lam_max, level: CriticalLevel
) -> FinalReport:
    """Check the arriving state against the declared maximum.

    All failures are report entries, never exceptions.  An isolated maximum
    needs the reduced space collapsed to a plane of vanishing line area with
    Euler class the positive generator (the sign flip relative to the
    minimum); a declared 4-dimensional maximum is compared by fingerprint.
    """
    lam_max = Fraction(lam_max)
    checks: list[FinalCheck] = []
    comp = level.components[0]
    lat, fam, e = state.lattice, state.family, state.euler.cls
    if comp.kind is ComponentKind.POINT:
        collapsed = lat.rank == 1 and lat.gram == ((1,),)
        checks.append(
            FinalCheck(
                "reduced space must collapse",
                collapsed,
                "" if collapsed else f"rank {lat.rank} lattice remains at the maximum",
            )
        )
        if collapsed:
            area = fam.area(lat.basis(0), lam_max)
            checks.append(
                FinalCheck(
                    "line area vanishes at the maximum",
                    area == 0,
                    f"area(L)({fmt_q(lam_max)}) = {fmt_q(area)}",
                )
            )
            positive = e == lat.basis(0)
            checks.append(
                FinalCheck(
                    "final Euler class is the positive generator",
                    positive,
                    f"e = {lat.name_of(e)}",
                )
            )
    elif comp.kind is ComponentKind.FOURFOLD:
        declared = general_lattice(comp.gram, comp.canonical)
        same_type = _lattice_type(declared) == _lattice_type(lat)
        checks.append(
            FinalCheck(
                "maximum lattice type matches",
                same_type,
                f"declared {_lattice_type(declared)}, arrived {_lattice_type(lat)}",
            )
        )
        if same_type and comp.areas is not None:
            gram_inv = _inverse(declared.gram)
            declared_class = LatticeClass(
                _mat_vec(gram_inv, [Fraction(a) for a in comp.areas])
            )
            decl_fam = AffineClassFamily(
                declared,
                declared_class,
                declared.cls(*([0] * declared.rank)),
                Interval(lam_max, lam_max, True, True),
            )
            decl_marked = sorted(
                decl_fam.area(c, lam_max)
                for c in exceptional_classes(declared) + ruling_classes(declared)
            )
            arr_marked = sorted(
                fam.area(c, lam_max)
                for c in exceptional_classes(lat) + ruling_classes(lat)
            )
            checks.append(
                FinalCheck(
                    "marked areas at the maximum match",
                    decl_marked == arr_marked,
                    f"declared {[fmt_q(x) for x in decl_marked]}, "
                    f"arrived {[fmt_q(x) for x in arr_marked]}",
                )
            )
            vol_decl = declared.pair(declared_class, declared_class) / 2
            vol_arr = fam.volume_poly()(lam_max)
            checks.append(
                FinalCheck(
                    "volume at the maximum matches",
                    vol_decl == vol_arr,
                    f"declared {fmt_q(vol_decl)}, arrived {fmt_q(vol_arr)}",
                )
            )
    else:
        checks.append(
            FinalCheck(
                "maximum component shape supported",
                False,
                "codimension-4 surface maximum is out of scope",
            )
        )
    return FinalReport(lam_max, tuple(checks))


# ---------------------------------------------------------------------------
# full walks
# ---------------------------------------------------------------------------


def _record(state: WalkState) -> IntervalRecord:
    return IntervalRecord(
        state, state.family.volume_poly(), lookup(state.lattice, state.family)
    )


def run_walk(data: FixedPointData) -> WalkTrace:
    """Initialise at the minimum, cross every level in order, finalise.

    Deterministic; raises a ``WalkError`` naming the failing wall when a
    crossing is impossible, and returns a trace whose final report may fail
    when only the maximum data is inconsistent.
    """
    report = validate_structure(data)
    if not report.ok:
        raise PreconditionError(
            f"scenario {data.name!r} fails validation: " + "; ".join(report.lines())
        )
    state, declared_extremum = init_from_minimum(data)
    intervals = [_record(state)]
    events: list[CrossingEvent] = []
    for i in range(1, len(data.levels) - 1):
        level = data.levels[i]
        next_hi = data.levels[i + 1].value
        state, event = cross_level(state, level, next_hi)
        events.append(event)
        intervals.append(_record(state))
    final = finalize_at_maximum(state, data.levels[-1].value, data.levels[-1])
    return WalkTrace(data.name, tuple(intervals), tuple(events), final, declared_extremum)


def split_trace(trace: WalkTrace, t) -> tuple[WalkTrace, WalkTrace]:
    """Cut a trace at a regular value strictly inside one of its intervals."""
    t = Fraction(t)
    idx = None
    for i, rec in enumerate(trace.intervals):
        if rec.interval.lo < t < rec.interval.hi:
            idx = i
            break
        if rec.interval.lo == t or rec.interval.hi == t:
            raise PreconditionError(
                f"cannot split at {fmt_q(t)}: seams must be regular values, not walls"
            )
    if idx is None:
        raise PreconditionError(f"{fmt_q(t)} lies outside the moment interval")
    rec = trace.intervals[idx]

    def truncated(lo, hi) -> IntervalRecord:
        fam = rec.family.with_interval(Interval(lo, hi))
        state = WalkState(rec.lattice, fam, rec.euler)
        return IntervalRecord(state, fam.volume_poly(), lookup(rec.lattice, fam))

    left = WalkTrace(
        f"{trace.name}[<{fmt_q(t)}]",
        trace.intervals[:idx] + (truncated(rec.interval.lo, t),),
        trace.events[:idx],
        None,
        trace.declared_extremum,
    )
    right = WalkTrace(
        f"{trace.name}[>{fmt_q(t)}]",
        (truncated(t, rec.interval.hi),) + trace.intervals[idx + 1 :],
        trace.events[idx:],
        trace.final_report,
        trace.declared_extremum,
    )
    return left, right


_FINGERPRINT_FIELDS = (
    ("lattice_type", "lattice type"),
    ("canonical_self", "canonical self-pairing"),
    ("marked_areas", "marked areas and Euler pairings"),
    ("euler_self", "Euler self-pairing"),
    ("euler_canonical", "Euler-canonical pairing"),
    ("volume", "volume"),
)


def compose_traces(left: WalkTrace, right: WalkTrace) -> WalkTrace:
    """Glue two traces along a common regular seam.

    The seam fingerprints must agree exactly; the first divergent component
    is named in the error.  The boundary intervals merge into one regular
    interval, so recomposing a split reproduces the original fingerprints.
    """
    if left.final_report is not None:
        raise PreconditionError("left trace is closed at its maximum; nothing to glue")
    seam = left.intervals[-1].interval.hi
    if right.intervals[0].interval.lo != seam:
        raise GluingError(
            f"seam mismatch: left ends at {fmt_q(seam)}, right starts at "
            f"{fmt_q(right.intervals[0].interval.lo)}"
        )
    if left.events and left.events[-1].value >= seam:
        raise PreconditionError("seam coincides with a critical value of the left trace")
    if right.events and right.events[0].value <= seam:
        raise PreconditionError("seam coincides with a critical value of the right trace")
    fp_l = state_fingerprint(left.final_state, seam)
    fp_r = state_fingerprint(right.initial_state, seam)
    if fp_l != fp_r:
        for attr, label in _FINGERPRINT_FIELDS:
            if getattr(fp_l, attr) != getattr(fp_r, attr):
                raise GluingError(f"seam fingerprints diverge at {fmt_q(seam)}: {label}")
        raise InternalInvariantError("fingerprints differ but no field does")
    lo = left.intervals[-1].interval.lo
    hi = right.intervals[0].interval.hi
    rec = left.intervals[-1]
    fam = rec.family.with_interval(Interval(lo, hi))
    merged_state = WalkState(rec.lattice, fam, rec.euler)
    merged = IntervalRecord(merged_state, fam.volume_poly(), lookup(rec.lattice, fam))
    return WalkTrace(
        f"{left.name}+{right.name}",
        left.intervals[:-1] + (merged,) + right.intervals[1:],
        left.events + right.events,
        right.final_report,
        left.declared_extremum or right.declared_extremum,
    )
