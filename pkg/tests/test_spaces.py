"""Modeled cohomology rings: relations, push-forwards, integrals."""

from fractions import Fraction

import pytest

from chernlab.char_classes import FormalBundle, chern_character
from chernlab.exact_algebra import GradedElement, ge_inverse
from chernlab.spaces import (
    IntegrationError,
    compose_maps,
    grassmannian_quotient_classes,
    projective_bundle,
    projective_space,
    rank2_a_class,
    segre_classes,
    universal_rank2_base,
)


# ---------------------------------------------------------------------------
# Projective space
# ---------------------------------------------------------------------------


def test_projective_space_integral_picks_top_power():
    p2 = projective_space(2)
    h = p2.generator("h")
    assert p2.integrate(p2.pow(h, 2)) == 1
    assert p2.integrate(h) == 0
    assert p2.integrate(p2.one()) == 0


def test_projective_space_truncation_kills_high_powers():
    p2 = projective_space(2)
    h = p2.generator("h")
    assert p2.pow(h, 3).terms == {}


def test_tangent_bundle_euler_rule():
    p3 = projective_space(3)
    t = p3.tangent
    assert t.rank == 3
    h = p3.generator("h")
    # c(T) = (1+h)^4
    assert t.chern.terms == p3.pow(p3.one() + h, 4).terms


def test_point_space():
    pt = projective_space(0)
    assert pt.integrate(pt.one()) == 1
    assert pt.tangent.rank == 0


# ---------------------------------------------------------------------------
# Projective bundles
# ---------------------------------------------------------------------------


def make_universal_bundle(truncation=8):
    base = universal_rank2_base(truncation)
    c1 = base.generator("c1")
    c2 = base.generator("c2")
    F = FormalBundle(2, base.one() + c1 + c2)
    return base, F


def test_fiber_relation_is_alternating():
    # xi^r = c1 xi^{r-1} - c2 xi^{r-2} + c3 xi^{r-3} - ...
    base = universal_rank2_base(6)
    c1 = base.generator("c1")
    c2 = base.generator("c2")
    c3 = base.mul(c1, c2)
    F = FormalBundle(3, base.one() + c1 + c2 + c3)
    space, p = projective_bundle(base, F)
    xi = space.generator(p.fiber_name)
    lhs = space.pow(xi, 3)
    rhs = (
        space.mul(p.pullback(c1), space.pow(xi, 2))
        - space.mul(p.pullback(c2), xi)
        + p.pullback(c3)
    )
    assert space.reduce(lhs - rhs).terms == {}


def test_pushforward_of_fiber_powers_gives_segre():
    base, F = make_universal_bundle(6)
    space, p = projective_bundle(base, F)
    xi = space.generator(p.fiber_name)
    segre = segre_classes(F, 6)
    # p_*(xi^k) = s_{k - r + 1} with r = 2
    assert p.pushforward(space.one()).terms == {}
    assert p.pushforward(xi).terms == base.one().terms
    for k in range(2, 7):
        assert p.pushforward(space.pow(xi, k)).terms == segre[k - 1].terms, k


def test_segre_inverts_alternating_total_chern():
    # the fiber relation alternates signs, so the Segre series inverts
    # 1 - c1 + c2 - ... rather than the plain total class
    base, F = make_universal_bundle(8)
    segre = segre_classes(F, 8)
    total_segre = base.zero()
    for s in segre:
        total_segre = total_segre + s
    alternating = base.zero()
    for i in range(base.truncation + 1):
        alternating = alternating + F.chern.grade_part(i).scale(Fraction((-1) ** i))
    prod = base.mul(total_segre, alternating)
    assert prod.terms == base.one().terms


def test_projection_formula():
    base, F = make_universal_bundle(6)
    space, p = projective_bundle(base, F)
    xi = space.generator(p.fiber_name)
    a = base.mul(base.generator("c1"), base.generator("c1"))
    lhs = p.pushforward(space.mul(p.pullback(a), space.pow(xi, 3)))
    rhs = base.mul(a, p.pushforward(space.pow(xi, 3)))
    assert lhs.terms == rhs.terms


def test_centered_class_pushforward_table():
    """Odd powers of the centered class push to powers of its square."""
    base, F = make_universal_bundle(8)
    space, p = projective_bundle(base, F)
    A = rank2_a_class(p)
    c1 = base.generator("c1")
    c2 = base.generator("c2")
    u = base.pow(c1, 2).scale(Fraction(1, 4)) - c2

    assert p.pushforward(space.pow(A, 1)).terms == base.one().terms
    for m in (0, 1, 2):
        assert p.pushforward(space.pow(A, 2 * m)).terms == {}, f"even 2m={2*m}"
    for m in (1, 2, 3):
        expected = base.pow(u, m)
        assert (
            p.pushforward(space.pow(A, 2 * m + 1)).terms == expected.terms
        ), f"odd 2m+1={2*m+1}"


def test_composite_pushforward_matches_stepwise():
    base = projective_space(2)
    h = base.generator("h")
    F = FormalBundle(2, base.one() + h)
    Z, g = projective_bundle(base, F)
    Fp = g.pullback_bundle(FormalBundle(2, base.one() + h.scale(2)))
    X, f = projective_bundle(Z, Fp)
    gf = compose_maps(g, f)
    xi_x = X.generator(f.fiber_name)
    xi_z = f.pullback(Z.generator(g.fiber_name))
    probe = X.mul(X.pow(xi_x, 2), X.pow(xi_z, 2))
    stepwise = g.pushforward(f.pushforward(probe))
    assert gf.pushforward(probe).terms == stepwise.terms


def test_composite_relative_tangent_rank():
    base = projective_space(2)
    h = base.generator("h")
    F = FormalBundle(2, base.one() + h)
    Z, g = projective_bundle(base, F)
    Fp = g.pullback_bundle(FormalBundle(3, base.one() + h))
    X, f = projective_bundle(Z, Fp)
    gf = compose_maps(g, f)
    assert gf.relative_dimension == 3
    assert gf.relative_tangent.rank == 3


def test_tangent_of_projective_bundle_is_relative_plus_base():
    base = projective_space(2)
    h = base.generator("h")
    F = FormalBundle(2, base.one() + h)
    Z, g = projective_bundle(base, F)
    assert Z.tangent is not None
    assert Z.tangent.rank == 3
    lhs = chern_character(Z.tangent)
    rhs = chern_character(g.relative_tangent) + chern_character(
        g.pullback_bundle(base.tangent)
    )
    assert lhs.terms == rhs.terms


def test_integration_over_bundle_iterates_fiber_and_base():
    # integral over P(O + O(1)) on P^1 of xi * h equals 1
    base = projective_space(1)
    h = base.generator("h")
    F = FormalBundle(2, base.one() + h)
    Z, g = projective_bundle(base, F)
    xi = Z.generator(g.fiber_name)
    hz = g.pullback(h)
    assert Z.integrate(Z.mul(xi, hz)) == 1
    # xi^2 = c1(F) xi - c2(F) = h xi, so its integral is also 1
    assert Z.integrate(Z.pow(xi, 2)) == 1


def test_universal_base_has_no_integral():
    base = universal_rank2_base(4)
    with pytest.raises(IntegrationError):
        base.integrate(base.one())


def test_foreign_elements_rejected():
    p2 = projective_space(2)
    p3 = projective_space(3)
    h3 = p3.generator("h")
    with pytest.raises(ValueError):
        p2.reduce(h3)


# ---------------------------------------------------------------------------
# Grassmannian-style recurrence
# ---------------------------------------------------------------------------


def test_quotient_classes_match_series_inverse():
    maxk = 8
    base = universal_rank2_base(maxk)
    classes = grassmannian_quotient_classes(maxk, base)
    total = base.zero()
    for q in classes:
        total = total + q
    c_s = base.one() + base.generator("c1") + base.generator("c2")
    inverse = ge_inverse(c_s)
    assert total.terms == inverse.terms
    # each entry is pure of its weight
    for k, q in enumerate(classes):
        for j in range(maxk + 1):
            if j != k:
                assert q.grade_part(j).terms == {}


def test_quotient_classes_respect_truncation_guard():
    with pytest.raises(ValueError):
        grassmannian_quotient_classes(6, universal_rank2_base(4))
