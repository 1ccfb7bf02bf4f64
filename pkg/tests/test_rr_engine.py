"""Euler characteristics, the tower identity, and the transfer calculus."""

import math
import random
from fractions import Fraction

import pytest

from chernlab.char_classes import FormalBundle
from chernlab.exact_algebra import UnivariateSeries
from chernlab.rr_engine import (
    NoSolutionError,
    err_transfer_O,
    err_transfer_Ominus1,
    euler_characteristic,
    hrr_expected,
    hrr_table,
    random_tower_case,
    solve_R,
    tower_identity_check,
)
from chernlab.spaces import projective_space, universal_rank2_base


# ---------------------------------------------------------------------------
# Euler characteristics
# ---------------------------------------------------------------------------


def test_euler_characteristic_line_bundles_positive():
    for n in range(5):
        for k in range(6):
            chi = euler_characteristic(n, k)
            assert chi == math.comb(n + k, n), (n, k)
            assert isinstance(chi, Fraction)


def test_euler_characteristic_vanishing_window():
    for n in range(1, 5):
        for k in range(-n, 0):
            assert euler_characteristic(n, k) == 0, (n, k)


def test_euler_characteristic_serre_side():
    # below the vanishing window the value alternates by duality
    assert euler_characteristic(1, -2) == -1
    assert euler_characteristic(2, -4) == 3
    assert euler_characteristic(3, -5) == -4


def test_hrr_expected_matches_binomial():
    assert hrr_expected(3, 2) == math.comb(5, 3)
    assert hrr_expected(2, -1) == 0


def test_hrr_table_all_match():
    rows = hrr_table(4, 5)
    assert all(r[4] for r in rows)
    # covers the negative window too
    ks = {(n, k) for n, k, *_ in rows}
    assert (4, -4) in ks and (4, 5) in ks and (0, 0) in ks


# ---------------------------------------------------------------------------
# Tower identity
# ---------------------------------------------------------------------------


def build_trivial_e(X, f, g):
    return X.trivial_bundle(1)


def test_tower_identity_on_p2():
    base = projective_space(2)
    h = base.generator("h")
    F = FormalBundle(2, base.one() + h)
    Fp = FormalBundle(2, base.one() + h.scale(2))
    P = UnivariateSeries([0, 1, 0, Fraction(-1, 6)], 3)
    result = tower_identity_check(base, P, F, Fp, build_trivial_e)
    assert result.passed
    assert result.residual.terms == {}


def test_tower_identity_on_universal_base_with_fiber_line():
    base = universal_rank2_base(6)
    c1 = base.generator("c1")
    c2 = base.generator("c2")
    F = FormalBundle(2, base.one() + c1 + c2)
    Fp = FormalBundle(2, base.one() - c1 + c2.scale(2))

    def build_e(X, f, g):
        xi = X.generator(f.fiber_name)
        return X.line_bundle(xi.scale(-1))

    P = UnivariateSeries([0, Fraction(1, 2), 1], 2)
    result = tower_identity_check(base, P, F, Fp, build_e)
    assert result.passed
    assert result.residual.terms == {}


def test_tower_identity_requires_zero_constant_term():
    base = projective_space(2)
    h = base.generator("h")
    F = FormalBundle(2, base.one() + h)
    P = UnivariateSeries([1, 1], 1)
    with pytest.raises(ValueError):
        tower_identity_check(base, P, F, F, build_trivial_e)


def test_random_tower_cases_pass_and_cover_menu():
    rng = random.Random(99)
    bases = set()
    kinds = set()
    for _ in range(12):
        case = random_tower_case(rng)
        bases.add(case.description["base"])
        kinds.add(case.description["e_kind"])
        result = case.run()
        assert result.passed, case.label
        assert result.residual.terms == {}
    assert bases == {"P2", "universal2(6)"}
    assert len(kinds) >= 3


# ---------------------------------------------------------------------------
# Transfer operators
# ---------------------------------------------------------------------------


def test_err_transfer_trivial_line_frozen_series():
    image = err_transfer_O(UnivariateSeries([0, 1], 1), 3).series_in_u
    assert [image.coefficient(k) for k in range(4)] == [
        Fraction(2),
        Fraction(2, 3),
        Fraction(-2, 45),
        Fraction(4, 945),
    ]


def test_err_transfer_dual_line_frozen_series():
    image = err_transfer_Ominus1(UnivariateSeries([0, 1], 1), 3).series_in_u
    assert [image.coefficient(k) for k in range(4)] == [
        Fraction(2),
        Fraction(-1, 3),
        Fraction(7, 180),
        Fraction(-31, 7560),
    ]


def test_err_transfer_operators_are_linear():
    a = UnivariateSeries([0, 2, 0, 1], 3)
    b = UnivariateSeries([0, 0, 1, Fraction(-1, 2)], 3)
    combined = a + b
    for op in (err_transfer_O, err_transfer_Ominus1):
        lhs = op(combined, 2).series_in_u
        rhs = op(a, 2).series_in_u + op(b, 2).series_in_u
        assert lhs.coefficients == rhs.coefficients


def test_dual_line_operator_annihilates_even_monomials():
    for j in (2, 4, 6):
        mono = UnivariateSeries([0] * j + [1], j)
        image = err_transfer_Ominus1(mono, 3).series_in_u
        assert image.is_zero(), f"x^{j}"


def test_trivial_line_operator_keeps_even_monomials():
    image = err_transfer_O(UnivariateSeries([0, 0, 1], 2), 2).series_in_u
    assert not image.is_zero()


def test_solve_r_round_trip_random():
    rng = random.Random(5150)
    for trial in range(6):
        degree = rng.randrange(1, 8)
        coeffs = [Fraction(0)] + [
            Fraction(rng.randrange(-6, 7), rng.randrange(1, 5))
            for _ in range(degree)
        ]
        R = UnivariateSeries(coeffs, degree)
        order = max((degree + 1) // 2, 1)
        t_o = err_transfer_O(R, order).series_in_u
        t_o1 = err_transfer_Ominus1(R, order).series_in_u
        sol = solve_R(t_o, t_o1, order)
        recovered = sol.combined()
        for k in range(degree + 1):
            assert recovered.coefficient(k) == R.coefficient(k), (trial, k)
        # anything beyond the sampled degree must come back zero
        for k in range(degree + 1, 2 * order + 2):
            assert recovered.coefficient(k) == 0, (trial, k)


def test_solve_r_parity_split():
    R = UnivariateSeries([0, 1, Fraction(1, 2), -1, Fraction(2, 3)], 4)
    t_o = err_transfer_O(R, 2).series_in_u
    t_o1 = err_transfer_Ominus1(R, 2).series_in_u
    sol = solve_R(t_o, t_o1, 2)
    assert all(sol.r_even.coefficient(k) == 0 for k in range(1, 6, 2))
    assert all(sol.r_odd.coefficient(k) == 0 for k in range(0, 6, 2))


def test_solve_r_rejects_inconsistent_constant():
    R = UnivariateSeries([0, 1], 1)
    t_o = err_transfer_O(R, 2).series_in_u
    t_o1 = err_transfer_Ominus1(R, 2).series_in_u
    # break the forced u^0 coefficient of the O target
    broken = UnivariateSeries(
        [t_o.coefficient(0) + 1] + [t_o.coefficient(k) for k in range(1, 3)], 2
    )
    with pytest.raises(NoSolutionError) as exc_info:
        solve_R(broken, t_o1, 2)
    assert exc_info.value.failing_order == 0
