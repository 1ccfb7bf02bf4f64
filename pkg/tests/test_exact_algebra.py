"""Series and graded-ring foundations."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chernlab.exact_algebra import (
    GeneratorSet,
    GradedElement,
    SeriesError,
    UnivariateSeries,
    exp_series,
    ge_exp,
    ge_inverse,
    render_graded,
    render_rational,
    series_compose,
    series_div,
    series_exp,
    series_log,
    series_mul,
    todd_series,
)

rationals = st.fractions(min_value=-40, max_value=40, max_denominator=8)


def series(coeffs, order=None):
    return UnivariateSeries(coeffs, order if order is not None else len(coeffs) - 1)


# ---------------------------------------------------------------------------
# Univariate series
# ---------------------------------------------------------------------------


def test_todd_series_frozen_coefficients():
    t = todd_series(6)
    expected = [
        Fraction(1),
        Fraction(1, 2),
        Fraction(1, 12),
        Fraction(0),
        Fraction(-1, 720),
        Fraction(0),
        Fraction(1, 30240),
    ]
    assert [t.coefficient(k) for k in range(7)] == expected


def test_exp_series_frozen():
    e = exp_series(5)
    assert [e.coefficient(k) for k in range(6)] == [
        Fraction(1, 1),
        Fraction(1, 1),
        Fraction(1, 2),
        Fraction(1, 6),
        Fraction(1, 24),
        Fraction(1, 120),
    ]


def test_series_mul_cauchy():
    a = series([1, 2, 3])
    b = series([4, 5, 6])
    prod = series_mul(a, b)
    # (1 + 2x + 3x^2)(4 + 5x + 6x^2) truncated at x^2
    assert [prod.coefficient(k) for k in range(3)] == [4, 13, 28]


def test_series_div_exact_inverse():
    denom = series([1, -1, Fraction(1, 2), Fraction(-1, 6)])
    q = series_div(UnivariateSeries.one(3), denom)
    back = series_mul(q, denom)
    assert [back.coefficient(k) for k in range(4)] == [1, 0, 0, 0]


def test_series_div_cancels_valuation():
    # x + x^2 divided by x is 1 + x, with the order budget spent by one
    num = series([0, 1, 1, 0], 3)
    den = series([0, 1], 3)
    q = series_div(num, den)
    assert q.coefficient(0) == 1
    assert q.coefficient(1) == 1
    assert q.order >= 2


def test_series_div_rejects_zero_divisor():
    with pytest.raises(SeriesError):
        series_div(series([1, 2]), series([0, 0]))


def test_series_div_rejects_nonzero_remainder_valuation():
    # 1/x is not a power series
    with pytest.raises(SeriesError):
        series_div(series([1, 0]), series([0, 1]))


def test_series_exp_log_round_trip():
    g = series([0, Fraction(1, 2), Fraction(-1, 3), Fraction(1, 4), 2], 4)
    assert series_log(series_exp(g)).coefficients == g.coefficients


def test_series_compose_horner():
    outer = series([1, 1, 1], 2)
    inner = series([0, 2, 1], 2)
    comp = series_compose(outer, inner)
    # 1 + (2x + x^2) + (2x + x^2)^2 = 1 + 2x + 5x^2 + O(x^3)
    assert [comp.coefficient(k) for k in range(3)] == [1, 2, 5]


def test_series_compose_requires_zero_constant():
    with pytest.raises(ValueError):
        series_compose(series([1, 1]), series([1, 1]))


@given(
    st.lists(rationals, min_size=1, max_size=5),
    st.lists(rationals, min_size=1, max_size=5),
    st.lists(rationals, min_size=1, max_size=5),
)
@settings(max_examples=60, deadline=None)
def test_series_mul_associative_commutative(xs, ys, zs):
    order = 4
    a = UnivariateSeries(xs, order)
    b = UnivariateSeries(ys, order)
    c = UnivariateSeries(zs, order)
    ab_c = series_mul(series_mul(a, b), c)
    a_bc = series_mul(a, series_mul(b, c))
    assert ab_c.coefficients == a_bc.coefficients
    assert series_mul(a, b).coefficients == series_mul(b, a).coefficients


@given(st.lists(rationals, min_size=2, max_size=6))
@settings(max_examples=40, deadline=None)
def test_series_div_round_trip(coeffs):
    order = len(coeffs) - 1
    denom = UnivariateSeries([Fraction(1)] + coeffs[1:], order)
    num = UnivariateSeries(coeffs, order)
    q = series_div(num, denom)
    back = series_mul(q, denom)
    assert [back.coefficient(k) for k in range(order + 1)] == [
        num.coefficient(k) for k in range(order + 1)
    ]


# ---------------------------------------------------------------------------
# Graded elements
# ---------------------------------------------------------------------------


GENS = GeneratorSet(("x", "y"), (1, 2))


def elem(terms, truncation=6):
    return GradedElement(GENS, truncation, {e: Fraction(c) for e, c in terms.items()})


def test_graded_truncation_drops_high_weight():
    x = GradedElement.generator(GENS, 2, "x")
    y = GradedElement.generator(GENS, 2, "y")
    prod = x * y  # weight 3 > truncation 2
    assert prod.terms == {}


def test_graded_mul_collects_terms():
    a = elem({(1, 0): 1, (0, 1): 1})  # x + y
    b = elem({(1, 0): 1, (0, 1): -1})  # x - y
    prod = a * b
    assert prod.coefficient((2, 0)) == 1
    assert prod.coefficient((0, 2)) == -1
    assert prod.coefficient((1, 1)) == 0


def test_ge_exp_matches_series_definition():
    x = GradedElement.generator(GENS, 4, "x")
    e = ge_exp(x)
    assert e.coefficient((0, 0)) == 1
    assert e.coefficient((1, 0)) == 1
    assert e.coefficient((2, 0)) == Fraction(1, 2)
    assert e.coefficient((3, 0)) == Fraction(1, 6)
    assert e.coefficient((4, 0)) == Fraction(1, 24)


def test_ge_exp_requires_positive_weight():
    one = GradedElement.constant(GENS, 3, 1)
    with pytest.raises(ValueError):
        ge_exp(one)


def test_ge_inverse_round_trip():
    a = elem({(0, 0): 1, (1, 0): 2, (0, 1): -3, (2, 0): Fraction(1, 2)}, truncation=5)
    inv = ge_inverse(a)
    prod = a * inv
    assert prod.coefficient((0, 0)) == 1
    assert all(c == 0 for e, c in prod.terms.items() if e != (0, 0))


def test_ge_inverse_needs_unit_constant_term():
    with pytest.raises(ValueError):
        ge_inverse(elem({(1, 0): 1}))


@given(
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 1)), rationals, max_size=4
    ),
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 1)), rationals, max_size=4
    ),
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 1)), rationals, max_size=4
    ),
)
@settings(max_examples=60, deadline=None)
def test_graded_ring_laws(da, db, dc):
    a, b, c = elem(da), elem(db), elem(dc)
    assert ((a * b) * c).terms == (a * (b * c)).terms
    assert (a * b).terms == (b * a).terms
    assert (a * (b + c)).terms == (a * b + a * c).terms


def test_render_rational():
    assert render_rational(Fraction(10)) == "10"
    assert render_rational(Fraction(-1, 4)) == "-1/4"


def test_render_graded_golden():
    u = elem({(2, 0): Fraction(1, 4), (0, 1): -1}, truncation=8)
    # generator weights order terms by total weight, then lexicographically
    assert render_graded(u) == "1/4*x^2 - 1*y"
