"""Executable classification certificates.

A certificate is a logical object: it asserts that the classification
hypotheses (consistent fixed point data, a completed walk, rigidity of every
intermediate reduced space) verifiably hold for the given scenario.  No
symplectomorphism is ever constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import BootstrapError, PreconditionError, WalkError
from .formatting import fmt_q
from .rigidity import Certification, certify
from .scenario import (
    ComparisonResult,
    CriticalLevel,
    FixedPointData,
    compare_fixed_point_data,
    isolated_value_lattice_check,
    validate_structure,
)
from .walk import WalkTrace, run_walk


@dataclass(frozen=True)
class Certificate:
    """A positive classification outcome with its supporting evidence."""

    scenario: str
    lambdas: tuple[Fraction, Fraction, Fraction]
    trace: WalkTrace
    certification: Certification

    @property
    def model_name(self) -> str:
        lams = ",".join(fmt_q(x) for x in self.lambdas)
        return f"diagonal circle action on S2 x S2 x S2 with sphere areas ({lams})"

    def lines(self) -> list[str]:
        out = [
            f"CERTIFICATE: {self.scenario} is equivariantly symplectomorphic to the",
            f"  {self.model_name}",
            f"  walk: k-sequence {list(self.trace.k_sequence)}, "
            f"walls at ({', '.join(fmt_q(w) for w in self.trace.walls)})",
            f"  certification: {self.certification.level}",
            "  rigidity facts used:",
        ]
        seen = []
        for res in self.certification.statuses:
            if res.fact is not None and res.fact.key not in seen:
                seen.append(res.fact.key)
                out.append(f"    - {res.fact.key}: {res.fact.citation}")
        return out


@dataclass(frozen=True)
class Refusal:
    """A negative outcome naming the first failing check."""

    scenario: str
    stage: str
    reason: str

    def lines(self) -> list[str]:
        return [f"REFUSAL: {self.scenario}", f"  failing check: {self.stage}", f"  {self.reason}"]


def classify_isolated(data: FixedPointData) -> Union[Certificate, Refusal]:
    """Certify a scenario with only isolated fixed points.

    Runs, in order: structural validation, the critical-value lattice check,
    the full walk with its maximum check, and rigidity certification.  The
    first failure becomes a refusal.
    """
    report = validate_structure(data)
    if not report.ok:
        return Refusal(data.name, "structure validation", report.lines()[0])
    if not data.is_isolated() or data.dim != 6:
        return Refusal(
            data.name, "applicability", "isolated classification needs point components in dim 6"
        )
    value_check = isolated_value_lattice_check(data)
    if not value_check.passed:
        return Refusal(data.name, "critical value lattice", value_check.message)
    try:
        trace = run_walk(data)
    except WalkError as err:
        return Refusal(data.name, "wall crossing", str(err))
    if trace.final_report is None or not trace.final_report.passed:
        failing = [line for line in trace.final_report.lines() if line.startswith("FAIL")]
        return Refusal(data.name, "maximum check", "; ".join(failing))
    certification = certify(trace)
    if not certification.certified:
        return Refusal(data.name, "rigidity certification", certification.reason)
    return Certificate(data.name, value_check.lambdas, trace, certification)


@dataclass(frozen=True)
class DataCertificate:
    """The single-scenario outcome of the determined-by-data theorems.

    Asserts that any manifold realising this (simple-level, all reduced
    spaces rigid) fixed point data is equivariantly symplectomorphic to the
    walked one; for small-mode data of points and surfaces the small data
    already suffices because the walk rederives the bundle classes.
    """

    scenario: str
    mode: str
    trace: WalkTrace
    certification: Certification

    def lines(self) -> list[str]:
        basis = "small fixed point data" if self.mode == "small" else "fixed point data"
        out = [
            f"CERTIFICATE: {self.scenario} is determined up to equivariant",
            f"  symplectomorphism by its {basis}",
            f"  walk: k-sequence {list(self.trace.k_sequence)}, "
            f"walls at ({', '.join(fmt_q(w) for w in self.trace.walls)})",
            f"  certification: {self.certification.level}",
            "  rigidity facts used:",
        ]
        seen = []
        for res in self.certification.statuses:
            if res.fact is not None and res.fact.key not in seen:
                seen.append(res.fact.key)
                out.append(f"    - {res.fact.key}: {res.fact.citation}")
        return out


def classify_general(data: FixedPointData) -> Union[DataCertificate, Refusal]:
    """The determined-by-data certificate for scenarios with surfaces.

    Needs simple levels, a completed walk with a consistent maximum, and
    rigidity on every regular interval; the rest of the hypotheses are the
    structural ones validation already checks.
    """
    report = validate_structure(data)
    if not report.ok:
        return Refusal(data.name, "structure validation", report.lines()[0])
    non_simple = [lv.value for lv in data.levels if not lv.simple]
    if non_simple:
        return Refusal(
            data.name,
            "applicability",
            f"levels at {[fmt_q(v) for v in non_simple]} are not simple",
        )
    try:
        trace = run_walk(data)
    except WalkError as err:
        return Refusal(data.name, "wall crossing", str(err))
    if trace.final_report is None or not trace.final_report.passed:
        failing = [line for line in trace.final_report.lines() if line.startswith("FAIL")]
        return Refusal(data.name, "maximum check", "; ".join(failing))
    certification = certify(trace)
    if not certification.certified:
        return Refusal(data.name, "rigidity certification", certification.reason)
    return DataCertificate(data.name, data.mode, trace, certification)


def small_data_bootstrap(data: FixedPointData) -> FixedPointData:
    """Recover full fixed point data by replaying the walk.

    Each interior level's reduction-bundle Euler class is read off the state
    arriving from below, so the bundle data is a function of everything
    beneath it.  Idempotent: bootstrapping the result reproduces it.
    """
    report = validate_structure(data)
    if not report.ok:
        raise BootstrapError(f"scenario fails validation: {report.lines()[0]}")
    try:
        trace = run_walk(data)
    except WalkError as err:
        raise BootstrapError(str(err), level=err.wall) from err
    arriving = {rec.interval.hi: rec for rec in trace.intervals}
    levels = []
    for i, lv in enumerate(data.levels):
        interior = 0 < i < len(data.levels) - 1
        euler = None
        if interior:
            rec = arriving.get(lv.value)
            if rec is None:
                raise BootstrapError("walk does not reach this level", level=lv.value)
            euler = rec.euler.cls
        levels.append(CriticalLevel(lv.value, lv.components, euler))
    return FixedPointData.build(data.name, data.dim, "full", levels)


@dataclass(frozen=True)
class WeakVerdict:
    kind: str  # "isomorphic (certified)" | "distinct data" | "inconclusive" | "not applicable"
    detail: str
    comparison: Optional[ComparisonResult] = None

    def lines(self) -> list[str]:
        return [f"VERDICT: {self.kind}", f"  {self.detail}"]


def weak_classification_check(d1: FixedPointData, d2: FixedPointData) -> WeakVerdict:
    """Same full fixed point data plus rigidity implies isomorphism.

    Exactly that logical content and nothing more: matching data over a
    reduced space outside the rigidity tables is reported as inconclusive,
    never as a classification.
    """
    for d in (d1, d2):
        if d.mode != "full":
            return WeakVerdict("not applicable", f"{d.name} is not full-mode data")
        report = validate_structure(d)
        if not report.ok:
            return WeakVerdict("not applicable", f"{d.name}: {report.lines()[0]}")
        if any(not lv.simple for lv in d.levels):
            return WeakVerdict("not applicable", f"{d.name} has non-simple levels")
    try:
        comparison = compare_fixed_point_data(d1, d2)
    except PreconditionError as err:
        return WeakVerdict("not applicable", str(err))
    if not comparison.same:
        return WeakVerdict(
            "distinct data", f"fixed point data differ: {comparison.witness}", comparison
        )
    certs = []
    for d in (d1, d2):
        try:
            certs.append(certify(run_walk(d)))
        except WalkError as err:
            return WeakVerdict("not applicable", f"{d.name} does not walk: {err}")
    if all(c.certified for c in certs):
        return WeakVerdict(
            "isomorphic (certified)",
            "fixed point data agree and every reduced space is rigid",
            comparison,
        )
    reasons = "; ".join(c.reason for c in certs if not c.certified)
    return WeakVerdict(
        "inconclusive", f"data agree but rigidity is not certified: {reasons}", comparison
    )
