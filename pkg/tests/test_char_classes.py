"""Characteristic classes against brute-force split-root oracles."""

import itertools
from fractions import Fraction

import pytest

from chernlab.char_classes import (
    CharSeries,
    FormalBundle,
    apply_class,
    bundle_dual,
    bundle_sum,
    chern_character,
    power_sums,
    todd_class,
    twist_by_line,
)
from chernlab.exact_algebra import (
    GeneratorSet,
    GradedElement,
    UnivariateSeries,
    ge_exp,
)

ROOT_NAMES = ("a", "b", "c", "d")


def split_ring(num_roots, truncation):
    gens = GeneratorSet(ROOT_NAMES[:num_roots], (1,) * num_roots)
    roots = [
        GradedElement.generator(gens, truncation, name)
        for name in ROOT_NAMES[:num_roots]
    ]
    return gens, roots


def split_bundle(roots):
    """The bundle whose Chern roots are the given weight-1 generators."""
    gens = roots[0].generators
    truncation = roots[0].truncation
    total = GradedElement.constant(gens, truncation, 1)
    for r in roots:
        total = total * (GradedElement.constant(gens, truncation, 1) + r)
    return FormalBundle(len(roots), total)


def brute_power_sum(roots, k):
    gens = roots[0].generators
    truncation = roots[0].truncation
    if k == 0:
        return GradedElement.constant(gens, truncation, len(roots))
    out = GradedElement.zero(gens, truncation)
    for r in roots:
        p = GradedElement.constant(gens, truncation, 1)
        for _ in range(k):
            p = p * r
        out = out + p
    return out


@pytest.mark.parametrize("num_roots", [1, 2, 3, 4])
def test_power_sums_match_brute_force(num_roots):
    max_weight = 6
    gens, roots = split_ring(num_roots, max_weight)
    bundle = split_bundle(roots)
    computed = power_sums(bundle, max_weight)  # [s_1, ..., s_max]
    assert len(computed) == max_weight
    for k in range(1, max_weight + 1):
        assert computed[k - 1].terms == brute_power_sum(roots, k).terms, f"s_{k}"


@pytest.mark.parametrize("num_roots", [1, 2, 3])
def test_chern_character_is_sum_of_root_exponentials(num_roots):
    truncation = 5
    gens, roots = split_ring(num_roots, truncation)
    bundle = split_bundle(roots)
    expected = GradedElement.zero(gens, truncation)
    for r in roots:
        expected = expected + ge_exp(r)
    assert chern_character(bundle).terms == expected.terms


@pytest.mark.parametrize("num_roots", [1, 2, 3])
def test_todd_class_is_product_over_roots(num_roots):
    truncation = 4
    gens, roots = split_ring(num_roots, truncation)
    bundle = split_bundle(roots)
    # x/(1 - e^{-x}) per root, multiplied out
    from chernlab.exact_algebra import todd_series, ge_evaluate_series

    expected = GradedElement.constant(gens, truncation, 1)
    for r in roots:
        expected = expected * ge_evaluate_series(todd_series(truncation), r)
    assert todd_class(bundle).terms == expected.terms


def test_chern_character_additive_on_sums():
    gens, roots = split_ring(3, 5)
    e1 = split_bundle(roots[:2])
    e2 = split_bundle(roots[2:])
    total = bundle_sum(e1, e2)
    lhs = chern_character(total)
    rhs = chern_character(e1) + chern_character(e2)
    assert lhs.terms == rhs.terms


def test_todd_multiplicative_on_sums():
    gens, roots = split_ring(3, 4)
    e1 = split_bundle(roots[:1])
    e2 = split_bundle(roots[1:])
    lhs = todd_class(bundle_sum(e1, e2))
    rhs = todd_class(e1) * todd_class(e2)
    assert lhs.terms == rhs.terms


def test_additive_class_additive_on_sums():
    phi = CharSeries.additive(UnivariateSeries([0, 1, 0, Fraction(-1, 6)], 3))
    gens, roots = split_ring(3, 3)
    e1 = split_bundle(roots[:2])
    e2 = split_bundle(roots[2:])
    lhs = apply_class(phi, bundle_sum(e1, e2))
    rhs = apply_class(phi, e1) + apply_class(phi, e2)
    assert lhs.terms == rhs.terms


def test_dual_negates_odd_weights():
    gens, roots = split_ring(2, 4)
    bundle = split_bundle(roots)
    dual = bundle_dual(bundle)
    for k in range(5):
        expected = bundle.chern.grade_part(k).scale(Fraction((-1) ** k))
        assert dual.chern.grade_part(k).terms == expected.terms


def test_dual_inverts_chern_character_roots():
    gens, roots = split_ring(2, 4)
    bundle = split_bundle(roots)
    ch_dual = chern_character(bundle_dual(bundle))
    expected = GradedElement.zero(gens, 4)
    for r in roots:
        expected = expected + ge_exp(r.scale(-1))
    assert ch_dual.terms == expected.terms


def test_twist_shifts_all_roots():
    gens, roots = split_ring(3, 4)
    bundle = split_bundle(roots[:2])
    ell = roots[2]
    twisted = twist_by_line(bundle, ell)
    expected = split_bundle([roots[0] + ell, roots[1] + ell])
    assert twisted.chern.terms == expected.chern.terms
    assert twisted.rank == 2


def test_twist_rank_one_is_exponential_shift():
    gens, roots = split_ring(2, 5)
    line = split_bundle(roots[:1])
    twisted = twist_by_line(line, roots[1])
    lhs = chern_character(twisted)
    rhs = ge_exp(roots[0] + roots[1])
    assert lhs.terms == rhs.terms


def test_multiplicative_series_must_start_at_one():
    with pytest.raises(ValueError):
        CharSeries.multiplicative(UnivariateSeries([0, 1], 1))


def test_additive_series_must_start_at_zero():
    with pytest.raises(ValueError):
        CharSeries.additive(UnivariateSeries([1, 1], 1))


def test_chern_class_accessor_bounds():
    gens, roots = split_ring(2, 4)
    bundle = split_bundle(roots)
    assert bundle.chern_class(0).constant_term() == 1
    assert bundle.chern_class(1).terms == (roots[0] + roots[1]).terms
    # beyond the rank the Chern classes vanish
    assert bundle.chern_class(3).terms == {}


def test_apply_class_general_additive_matches_root_sum():
    series = UnivariateSeries([0, 0, Fraction(1, 2), Fraction(1, 3)], 3)
    phi = CharSeries.additive(series)
    gens, roots = split_ring(3, 3)
    bundle = split_bundle(roots)
    from chernlab.exact_algebra import ge_evaluate_series

    expected = GradedElement.zero(gens, 3)
    for r in roots:
        expected = expected + ge_evaluate_series(series, r)
    assert apply_class(phi, bundle).terms == expected.terms


def test_apply_class_general_multiplicative_matches_root_product():
    series = UnivariateSeries([1, Fraction(1, 4), Fraction(-1, 8)], 2)
    phi = CharSeries.multiplicative(series)
    gens, roots = split_ring(2, 2)
    bundle = split_bundle(roots)
    from chernlab.exact_algebra import ge_evaluate_series

    expected = GradedElement.constant(gens, 2, 1)
    for r in roots:
        expected = expected * ge_evaluate_series(series, r)
    assert apply_class(phi, bundle).terms == expected.terms
