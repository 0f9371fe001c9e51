from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dhwalk.classify import (
    Certificate,
    Refusal,
    classify_isolated,
    small_data_bootstrap,
    weak_classification_check,
)
from dhwalk.errors import BootstrapError
from dhwalk.lattice import LatticeClass, cls
from dhwalk.scenario import (
    CriticalLevel,
    FixedPointData,
    compare_fixed_point_data,
    fourfold_component,
    point_component,
    surface_component,
    three_sphere_product_data,
)
from dhwalk.io import serialize_scenario
from testutil import isolated_scenario

areas = st.fractions(min_value=Fraction(1, 3), max_value=Fraction(8), max_denominator=6)


# ---------------------------------------------------------------------------
# the isolated certificate
# ---------------------------------------------------------------------------


def test_certificate_for_the_generic_triple():
    outcome = classify_isolated(three_sphere_product_data(2, 3, 4))
    assert isinstance(outcome, Certificate)
    assert outcome.lambdas == (2, 3, 4)
    assert outcome.certification.certified
    text = "\n".join(outcome.lines())
    assert "sphere areas (2,3,4)" in text
    assert "McDuff" in text


def test_certificate_for_the_thin_triple():
    outcome = classify_isolated(three_sphere_product_data(1, 2, 4))
    assert isinstance(outcome, Certificate)
    assert outcome.trace.k_sequence == (0, 1, 2, 1, 2, 1, 0)
    # the sphere-product interval contributes its own rigidity citation
    assert any(
        r.fact is not None and r.fact.key == "sphere-product"
        for r in outcome.certification.statuses
    )


def test_certificate_for_the_equal_triple_uses_the_equal_area_branch():
    outcome = classify_isolated(three_sphere_product_data(1, 1, 1))
    assert isinstance(outcome, Certificate)
    assert any(
        r.fact is not None and r.fact.key == "small-blowup-equal-areas"
        for r in outcome.certification.statuses
    )


def test_refusal_on_perturbed_value_multiset():
    data = isolated_scenario({0: [0], 2: [2, 3, 4], 4: [5, 6, 8], 6: [9]})
    outcome = classify_isolated(data)
    assert isinstance(outcome, Refusal)
    assert outcome.stage == "critical value lattice"


def test_refusal_on_non_isolated_data():
    levels = [
        CriticalLevel(0, [point_component(0)]),
        CriticalLevel(1, [surface_component(2, cls(2), genus=0)]),
        CriticalLevel(2, [point_component(6)]),
    ]
    outcome = classify_isolated(FixedPointData.build("conic", 6, "small", levels))
    assert isinstance(outcome, Refusal)
    assert outcome.stage == "applicability"


@settings(max_examples=30, deadline=None)
@given(a=areas, b=areas, c=areas)
def test_every_positive_triple_certifies(a, b, c):
    lams = tuple(sorted((a, b, c)))
    outcome = classify_isolated(three_sphere_product_data(*lams))
    assert isinstance(outcome, Certificate), getattr(outcome, "reason", None)
    assert outcome.lambdas == lams


# ---------------------------------------------------------------------------
# the determined-by-data certificate for scenarios with surfaces
# ---------------------------------------------------------------------------


def conic_wall_scenario():
    levels = [
        CriticalLevel(0, [point_component(0)]),
        CriticalLevel(1, [surface_component(2, cls(2), genus=0)]),
        CriticalLevel(2, [point_component(6)]),
    ]
    return FixedPointData.build("conic-wall", 6, "small", levels)


def test_general_certificate_for_a_surface_scenario():
    from dhwalk.classify import DataCertificate, classify_general

    outcome = classify_general(conic_wall_scenario())
    assert isinstance(outcome, DataCertificate)
    assert "small fixed point data" in "\n".join(outcome.lines())


def test_general_path_refuses_uncertified_extrema():
    from dhwalk.classify import classify_general

    prod = FixedPointData.build(
        "face-value-product",
        6,
        "small",
        [
            CriticalLevel(0, [fourfold_component(0, ((0, 1), (1, 0)), (1, 2), 0)]),
            CriticalLevel(4, [fourfold_component(2, ((0, 1), (1, 0)), (1, 2), 0)]),
        ],
    )
    outcome = classify_general(prod)
    assert isinstance(outcome, Refusal)
    assert outcome.stage == "rigidity certification"


def test_general_path_refuses_non_simple_levels():
    from dhwalk.classify import classify_general

    outcome = classify_general(three_sphere_product_data(1, 2, 3))
    assert isinstance(outcome, Refusal)
    assert outcome.stage == "applicability"


# ---------------------------------------------------------------------------
# the bootstrap
# ---------------------------------------------------------------------------


def test_bootstrap_recovers_bundle_classes():
    full = small_data_bootstrap(three_sphere_product_data(2, 3, 4, mode="small"))
    assert full.mode == "full"
    # the state arriving at the first pairwise-sum wall carries -L+E1+E2+E3
    assert full.level_at(5).euler_minus == cls(-1, 1, 1, 1)
    assert full.level_at(2).euler_minus == cls(-1)
    # extremal levels carry no bundle data
    assert full.levels[0].euler_minus is None
    assert full.levels[-1].euler_minus is None


def test_bootstrap_is_idempotent():
    once = small_data_bootstrap(three_sphere_product_data(2, 3, 4, mode="small"))
    twice = small_data_bootstrap(once)
    assert compare_fixed_point_data(once, twice).same
    assert serialize_scenario(once) == serialize_scenario(twice)


def test_bootstrap_shifts_bundle_class_above_a_surface_level():
    levels = [
        CriticalLevel(0, [point_component(0)]),
        CriticalLevel(1, [surface_component(2, cls(2), genus=0)]),
        CriticalLevel(Fraction(5, 4), [point_component(2)]),
        CriticalLevel(
            Fraction(3, 2),
            [fourfold_component(2, ((1, 0), (0, -1)), (Fraction(1, 2), Fraction(1, 4)))],
        ),
    ]
    data = FixedPointData.build("conic-then-point", 6, "small", levels)
    full = small_data_bootstrap(data)
    # below the surface the bundle is the negative generator; above, shifted by 2L
    assert full.level_at(1).euler_minus == cls(-1)
    assert full.level_at(Fraction(5, 4)).euler_minus == cls(1)


def test_bootstrap_refusal_names_the_failing_wall():
    data = isolated_scenario({0: [0], 2: [2, 3, 4], 4: [5, 6, 8], 6: [9]})
    with pytest.raises(BootstrapError):
        small_data_bootstrap(data)


# ---------------------------------------------------------------------------
# the weak classification check
# ---------------------------------------------------------------------------


def full_product(*lams):
    return small_data_bootstrap(three_sphere_product_data(*lams, mode="full"))


def test_weak_check_matching_certified_data():
    verdict = weak_classification_check(full_product(2, 3, 4), full_product(2, 3, 4))
    assert verdict.kind == "isomorphic (certified)"


def test_weak_check_distinct_data():
    verdict = weak_classification_check(full_product(2, 3, 4), full_product(2, 3, 6))
    assert verdict.kind == "distinct data"


def test_weak_check_corrupted_euler_is_distinct():
    good = full_product(2, 3, 4)
    corrupted_levels = [
        CriticalLevel(lv.value, lv.components, LatticeClass((-1, 0)))
        if lv.value == 3
        else lv
        for lv in good.levels
    ]
    corrupted = FixedPointData.build(good.name, 6, "full", corrupted_levels)
    verdict = weak_classification_check(good, corrupted)
    assert verdict.kind == "distinct data"
    assert "Euler fingerprint" in verdict.detail


def test_weak_check_symmetric():
    d1, d2 = full_product(2, 3, 4), full_product(2, 3, 6)
    assert (
        weak_classification_check(d1, d2).kind == weak_classification_check(d2, d1).kind
    )


def test_weak_check_inconclusive_over_uncertified_intervals():
    prod = FixedPointData.build(
        "face-value-product",
        6,
        "full",
        [
            CriticalLevel(0, [fourfold_component(0, ((0, 1), (1, 0)), (1, 2), 0)]),
            CriticalLevel(4, [fourfold_component(2, ((0, 1), (1, 0)), (1, 2), 0)]),
        ],
    )
    verdict = weak_classification_check(prod, prod)
    assert verdict.kind == "inconclusive"
    assert "face value" in verdict.detail


def test_weak_check_not_applicable_for_small_mode():
    small = three_sphere_product_data(2, 3, 4, mode="small")
    assert weak_classification_check(small, small).kind == "not applicable"


def test_weak_check_not_applicable_for_non_simple_levels():
    verdict = weak_classification_check(full_product(1, 2, 3), full_product(1, 2, 3))
    assert verdict.kind == "not applicable"
    assert "non-simple" in verdict.detail
