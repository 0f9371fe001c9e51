"""Fixed point data of a semi-free Hamiltonian circle action on a 6-manifold.

A scenario records, per critical value of the moment map, the fixed
components sitting in that level: isolated points (codimension 6), surfaces
embedded in the reduced space (codimension 4), or a 4-dimensional extremal
component (codimension 2, declared with its own lattice data and taken at
face value).  "Full" mode may additionally record the Euler class of the
reduction bundle arriving at each interior level; "small" mode never does,
and attempts to store one are rejected at construction.

Weights are not stored: semi-freeness is encoded structurally through the
normal splitting ranks and even Morse indices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import PreconditionError
from .formatting import fmt_q
from .lattice import LatticeClass, gram_signature


class ComponentKind(enum.Enum):
    POINT = "point"
    SURFACE = "surface"
    FOURFOLD = "fourfold"


#: complex rank of the normal bundle per component kind in dimension six
_NORMAL_RANK = {ComponentKind.POINT: 3, ComponentKind.SURFACE: 2, ComponentKind.FOURFOLD: 1}


@dataclass(frozen=True)
class FixedComponent:
    """One connected fixed component at a critical level.

    ``reduced_class`` (surfaces) is written in the basis of the reduced space
    arriving at this level from below.  The fourfold fields describe a
    codimension-2 extremal component: its declared intersection form, the
    symplectic areas of the declared basis at the extremal level, and the
    Euler data of its normal line bundle.
    """

    kind: ComponentKind
    index: int
    genus: Optional[int] = None
    reduced_class: Optional[LatticeClass] = None
    normal_split: Optional[tuple[int, int]] = None
    normal_euler: Optional[int] = None
    # fourfold extremum data
    gram: Optional[tuple[tuple[int, ...], ...]] = None
    areas: Optional[tuple[Fraction, ...]] = None
    canonical: Optional[tuple[int, ...]] = None
    euler_class: Optional[tuple[int, ...]] = None

    def expected_split(self) -> tuple[int, int]:
        """Normal splitting ranks forced by the index and the codimension."""
        down = self.index // 2
        return down, _NORMAL_RANK[self.kind] - down

    def sort_key(self):
        return (
            self.kind.value,
            self.index,
            -1 if self.genus is None else self.genus,
            () if self.reduced_class is None else self.reduced_class.coeffs,
            0 if self.normal_euler is None else self.normal_euler,
            () if self.gram is None else self.gram,
            () if self.areas is None else self.areas,
        )


def point_component(index: int) -> FixedComponent:
    return FixedComponent(ComponentKind.POINT, index, normal_split=(index // 2, 3 - index // 2))


def surface_component(
    index: int,
    reduced_class: LatticeClass,
    genus: int = 0,
    normal_euler: Optional[int] = None,
) -> FixedComponent:
    return FixedComponent(
        ComponentKind.SURFACE,
        index,
        genus=genus,
        reduced_class=reduced_class,
        normal_split=(index // 2, 2 - index // 2),
        normal_euler=normal_euler,
    )


def fourfold_component(
    index: int,
    gram: Sequence[Sequence[int]],
    areas: Sequence,
    normal_euler: int = 0,
    canonical: Optional[Sequence[int]] = None,
    euler_class: Optional[Sequence[int]] = None,
) -> FixedComponent:
    return FixedComponent(
        ComponentKind.FOURFOLD,
        index,
        normal_split=(index // 2, 1 - index // 2),
        normal_euler=normal_euler,
        gram=tuple(tuple(int(x) for x in row) for row in gram),
        areas=tuple(Fraction(a) for a in areas),
        canonical=None if canonical is None else tuple(int(x) for x in canonical),
        euler_class=None if euler_class is None else tuple(int(x) for x in euler_class),
    )


@dataclass(frozen=True)
class CriticalLevel:
    """All fixed components sharing one critical value.

    Components are stored in a canonical sorted order, so scenarios that
    merely permute the declared component list are equal as data.
    """

    value: Fraction
    components: tuple[FixedComponent, ...]
    euler_minus: Optional[LatticeClass] = None

    def __init__(self, value, components: Iterable[FixedComponent], euler_minus=None):
        object.__setattr__(self, "value", Fraction(value))
        object.__setattr__(
            self, "components", tuple(sorted(components, key=FixedComponent.sort_key))
        )
        object.__setattr__(self, "euler_minus", euler_minus)
        if not self.components:
            raise ValueError("critical level needs at least one component")
        if euler_minus is not None and not euler_minus.is_integral:
            raise ValueError("declared Euler class must be integral")

    @property
    def simple(self) -> bool:
        """All components share one Morse index."""
        return len({c.index for c in self.components}) == 1

    @property
    def index_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(c.index for c in self.components))


@dataclass(frozen=True)
class FixedPointData:
    """An ordered scenario of critical levels for one Hamiltonian manifold."""

    name: str
    dim: int
    mode: str  # "full" | "small"
    levels: tuple[CriticalLevel, ...]

    def __post_init__(self):
        if self.mode not in ("full", "small"):
            raise ValueError(f"mode must be 'full' or 'small', got {self.mode!r}")
        if self.mode == "small" and any(lv.euler_minus is not None for lv in self.levels):
            raise ValueError("small-mode data cannot carry reduction-bundle Euler classes")

    @classmethod
    def build(
        cls, name: str, dim: int, mode: str, levels: Iterable[CriticalLevel]
    ) -> "FixedPointData":
        """Sort levels by value and merge levels sharing one critical value."""
        by_value: dict[Fraction, list[CriticalLevel]] = {}
        for lv in levels:
            by_value.setdefault(lv.value, []).append(lv)
        merged = []
        for value in sorted(by_value):
            group = by_value[value]
            comps: list[FixedComponent] = []
            eulers = [lv.euler_minus for lv in group if lv.euler_minus is not None]
            if len(eulers) > 1:
                raise ValueError(f"conflicting Euler data at merged level {fmt_q(value)}")
            for lv in group:
                comps.extend(lv.components)
            merged.append(CriticalLevel(value, comps, eulers[0] if eulers else None))
        return cls(name, dim, mode, tuple(merged))

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(lv.value for lv in self.levels)

    @property
    def all_components(self) -> tuple[tuple[Fraction, FixedComponent], ...]:
        return tuple((lv.value, c) for lv in self.levels for c in lv.components)

    def level_at(self, value) -> CriticalLevel:
        value = Fraction(value)
        for lv in self.levels:
            if lv.value == value:
                return lv
        raise KeyError(f"no critical level at {fmt_q(value)}")

    def is_isolated(self) -> bool:
        return all(c.kind is ComponentKind.POINT for _, c in self.all_components)


# ---------------------------------------------------------------------------
# structural validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def lines(self) -> list[str]:
        return [str(i) for i in self.issues]


def validate_structure(data: FixedPointData) -> ValidationReport:
    """Structural checks independent of any wall-crossing computation.

    All findings are report entries, never exceptions; an empty report means
    the scenario is structurally admissible.
    """
    issues: list[ValidationIssue] = []

    def issue(code: str, message: str) -> None:
        issues.append(ValidationIssue(code, message))

    if data.dim != 6:
        issue("dim", f"ambient dimension must be 6, got {data.dim}")
    if not data.levels:
        issue("levels", "scenario has no critical levels")
        return ValidationReport(tuple(issues))
    values = [lv.value for lv in data.levels]
    for a, b in zip(values, values[1:]):
        if a == b:
            issue("values", f"duplicated critical value {fmt_q(a)} (levels must be merged)")
        elif a > b:
            issue("values", f"critical values out of order: {fmt_q(a)} before {fmt_q(b)}")
    if len(data.levels) < 2:
        issue("extrema", "scenario needs distinct minimum and maximum levels")
        return ValidationReport(tuple(issues))
    if values[0] != 0:
        issue("normalization", f"minimum critical value must be 0, got {fmt_q(values[0])}")

    first, last = data.levels[0], data.levels[-1]
    if len(first.components) != 1:
        issue("extrema", "extremal fixed point sets are connected: minimum has several components")
    if len(last.components) != 1:
        issue("extrema", "extremal fixed point sets are connected: maximum has several components")
    min_indices = {ComponentKind.POINT: 0, ComponentKind.SURFACE: 0, ComponentKind.FOURFOLD: 0}
    max_indices = {ComponentKind.POINT: 6, ComponentKind.SURFACE: 4, ComponentKind.FOURFOLD: 2}
    c0 = first.components[0]
    if c0.index != min_indices[c0.kind]:
        issue("extrema", f"minimum component must have index {min_indices[c0.kind]}, got {c0.index}")
    ctop = last.components[0]
    if ctop.index != max_indices[ctop.kind]:
        issue(
            "extrema",
            f"maximum component must have coindex 0 (index {max_indices[ctop.kind]} "
            f"for a {ctop.kind.value}), got {ctop.index}",
        )

    for lv in data.levels:
        extremal = lv is first or lv is last
        for c in lv.components:
            where = f"level {fmt_q(lv.value)}"
            if c.index % 2 != 0 or not 0 <= c.index <= 6:
                issue("index", f"{where}: index {c.index} is odd or out of range")
                continue
            if c.kind is ComponentKind.SURFACE and c.index > 4:
                issue("index", f"{where}: surface index {c.index} exceeds the codimension")
                continue
            if c.kind is ComponentKind.FOURFOLD and c.index > 2:
                issue("index", f"{where}: fourfold index {c.index} exceeds the codimension")
                continue
            if not extremal:
                if c.kind is ComponentKind.FOURFOLD:
                    issue("extrema", f"{where}: codimension-2 component must be extremal")
                elif c.index not in (2, 4):
                    issue(
                        "index",
                        f"{where}: non-extremal component must have (co)index 2, got index {c.index}",
                    )
            if c.normal_split is not None and c.normal_split != c.expected_split():
                issue(
                    "semi-free",
                    f"{where}: normal splitting {c.normal_split} inconsistent with a "
                    f"semi-free {c.kind.value} of index {c.index} "
                    f"(expected {c.expected_split()})",
                )
            if c.kind is not ComponentKind.SURFACE:
                if c.genus is not None:
                    issue("fields", f"{where}: genus declared on a {c.kind.value}")
                if c.reduced_class is not None:
                    issue("fields", f"{where}: reduced class declared on a {c.kind.value}")
            else:
                if c.genus is not None and c.genus < 0:
                    issue("fields", f"{where}: negative genus")
                if c.reduced_class is None:
                    issue("fields", f"{where}: surface component needs a reduced class")
            if c.kind is ComponentKind.FOURFOLD and (c.gram is None or c.areas is None):
                issue("fields", f"{where}: fourfold component needs declared gram and areas")
        if lv.euler_minus is not None and (lv is first or lv is last):
            issue("euler", f"level {fmt_q(lv.value)}: extremal levels carry no reduction bundle data")
    return ValidationReport(tuple(issues))


# ---------------------------------------------------------------------------
# the isolated value lattice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsolatedValueCheck:
    status: str  # "pass" | "fail" | "not-applicable"
    lambdas: Optional[tuple[Fraction, Fraction, Fraction]]
    message: str

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def isolated_value_lattice_check(data: FixedPointData) -> IsolatedValueCheck:
    """Check the eight critical values of an isolated-fixed-point scenario.

    For some ``l1 <= l2 <= l3`` read off the three index-2 points, the value
    multiset must be ``{0, l1, l2, l3, l1+l2, l1+l3, l2+l3, l1+l2+l3}``.
    """
    if data.dim != 6 or not data.is_isolated():
        return IsolatedValueCheck("not-applicable", None, "data has non-point components")
    per_component = [(value, c.index) for value, c in data.all_components]
    indices = sorted(idx for _, idx in per_component)
    if indices != [0, 2, 2, 2, 4, 4, 4, 6]:
        return IsolatedValueCheck(
            "fail", None, f"index multiset {indices} is not (0,2,2,2,4,4,4,6)"
        )
    lams = tuple(sorted(value for value, idx in per_component if idx == 2))
    l1, l2, l3 = lams
    expected = sorted([
        Fraction(0), l1, l2, l3, l1 + l2, l1 + l3, l2 + l3, l1 + l2 + l3,
    ])
    declared = sorted(value for value, _ in per_component)
    if expected != declared:
        missing = [fmt_q(v) for v in declared if v not in expected]
        return IsolatedValueCheck(
            "fail",
            lams,
            f"value multiset does not match sums of ({fmt_q(l1)},{fmt_q(l2)},{fmt_q(l3)}): "
            f"unexpected values {missing}",
        )
    return IsolatedValueCheck("pass", lams, "value lattice consistent")


# ---------------------------------------------------------------------------
# comparison up to relabeling and lattice isometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonResult:
    same: bool
    witness: Optional[str]


def _component_fingerprint(comp: FixedComponent, interval_record) -> tuple:
    base: tuple = (comp.kind.value, comp.index)
    if comp.kind is ComponentKind.SURFACE:
        extras: tuple = (comp.genus,)
        if interval_record is not None and comp.reduced_class is not None:
            lat = interval_record.lattice
            fam = interval_record.family
            f = comp.reduced_class
            if f.rank == lat.rank:
                extras += (
                    lat.pair(f, f),
                    lat.pair(f, lat.canonical),
                    fam.area_affine(f),
                )
        elif comp.reduced_class is not None:
            extras += (comp.reduced_class.coeffs,)
        extras += (comp.normal_euler,)
        return base + extras
    if comp.kind is ComponentKind.FOURFOLD:
        sig = gram_signature(comp.gram) if comp.gram else None
        areas = tuple(sorted(comp.areas)) if comp.areas else None
        return base + (sig, areas, comp.normal_euler)
    return base


def _euler_fingerprint(euler_cls: LatticeClass, interval_record) -> tuple:
    from .lattice import exceptional_classes, ruling_classes

    lat = interval_record.lattice
    fam = interval_record.family
    value = interval_record.interval.hi
    marked = []
    for c in exceptional_classes(lat) + ruling_classes(lat):
        marked.append((lat.pair(euler_cls, c), fam.area(c, value)))
    return (
        lat.pair(euler_cls, euler_cls),
        lat.pair(euler_cls, lat.canonical),
        tuple(sorted(marked)),
    )


def compare_fixed_point_data(d1: FixedPointData, d2: FixedPointData) -> ComparisonResult:
    """Level-by-level equality on basis-independent fingerprints.

    Declared classes are fingerprinted against the reduced-space lattice the
    walk engine derives on arrival at each level, so the comparison is blind
    to component relabeling and to any canonical-class-preserving isometry of
    the coordinates.
    """
    for d in (d1, d2):
        report = validate_structure(d)
        if not report.ok:
            raise PreconditionError(
                f"cannot compare invalid data {d.name!r}: {report.lines()[0]}"
            )
    if d1.mode != d2.mode:
        raise PreconditionError("cannot compare data of different modes")
    if [lv.value for lv in d1.levels] != [lv.value for lv in d2.levels]:
        return ComparisonResult(False, "value multiset")

    from . import walk as walk_mod
    from .errors import WalkError

    def arriving(data: FixedPointData):
        try:
            trace = walk_mod.run_walk(data)
        except WalkError:
            return None
        return {rec.interval.hi: rec for rec in trace.intervals}

    ctx1, ctx2 = arriving(d1), arriving(d2)
    for lv1, lv2 in zip(d1.levels, d2.levels):
        rec1 = ctx1.get(lv1.value) if ctx1 else None
        rec2 = ctx2.get(lv2.value) if ctx2 else None
        fp1 = sorted(_component_fingerprint(c, rec1) for c in lv1.components)
        fp2 = sorted(_component_fingerprint(c, rec2) for c in lv2.components)
        if fp1 != fp2:
            return ComparisonResult(False, f"level {fmt_q(lv1.value)}: component fingerprints")
        if (lv1.euler_minus is None) != (lv2.euler_minus is None):
            return ComparisonResult(
                False, f"level {fmt_q(lv1.value)}: Euler data present on one side only"
            )
        if lv1.euler_minus is not None and rec1 is not None and rec2 is not None:
            e1 = _euler_fingerprint(lv1.euler_minus, rec1)
            e2 = _euler_fingerprint(lv2.euler_minus, rec2)
            if e1 != e2:
                return ComparisonResult(
                    False, f"level {fmt_q(lv1.value)}: Euler fingerprint {{pair(e,C)}}"
                )
    return ComparisonResult(True, None)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def three_sphere_product_data(
    l1, l2, l3, mode: str = "full", name: Optional[str] = None
) -> FixedPointData:
    """The isolated-fixed-point scenario of a diagonal action on S2 x S2 x S2.

    Critical values are 0, the three sphere areas, their pairwise sums, and
    the total; equal values merge into multi-component levels.  Produced
    without reduction-bundle data; the bootstrap can fill that in.
    """
    lams = sorted(Fraction(x) for x in (l1, l2, l3))
    if lams[0] <= 0:
        raise ValueError("sphere areas must be positive")
    a, b, c = lams
    if name is None:
        name = f"three-spheres-{fmt_q(a)}-{fmt_q(b)}-{fmt_q(c)}".replace("/", "_")
    levels = [CriticalLevel(0, [point_component(0)])]
    for lam in lams:
        levels.append(CriticalLevel(lam, [point_component(2)]))
    for s in (a + b, a + c, b + c):
        levels.append(CriticalLevel(s, [point_component(4)]))
    levels.append(CriticalLevel(a + b + c, [point_component(6)]))
    return FixedPointData.build(name, 6, mode, levels)


def time_reversed(data: FixedPointData, name: Optional[str] = None) -> FixedPointData:
    """Run the Hamiltonian backwards: ``H -> max(H) - H``.

    Indices are complemented within each component's codimension and normal
    splittings swap.  Declared reduction-bundle data is dropped (it describes
    the bundle below a level, which reversal does not transport).
    """
    total = data.levels[-1].value
    reversed_levels = []
    for lv in data.levels:
        comps = []
        for c in lv.components:
            flipped = 2 * _NORMAL_RANK[c.kind] - c.index
            split = None if c.normal_split is None else (c.normal_split[1], c.normal_split[0])
            comps.append(
                FixedComponent(
                    c.kind,
                    flipped,
                    genus=c.genus,
                    reduced_class=c.reduced_class,
                    normal_split=split,
                    normal_euler=c.normal_euler,
                    gram=c.gram,
                    areas=c.areas,
                    canonical=c.canonical,
                    euler_class=c.euler_class,
                )
            )
        reversed_levels.append(CriticalLevel(total - lv.value, comps))
    return FixedPointData.build(
        name or f"{data.name}-reversed", data.dim, data.mode, reversed_levels
    )
