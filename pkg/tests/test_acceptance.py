"""End-to-end acceptance checklist.

Each test covers one advertised guarantee, prints a single PASS/FAIL line
(visible under pytest -s or -v with output capture disabled), and enforces
both the stated tolerance and a wall-clock budget.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np

from chernlab.char_classes import CharSeries, FormalBundle, power_sums
from chernlab.chern_weil import (
    EXP_CLAMP,
    PLATEAU,
    ChartGrid,
    bott_chern_numeric,
    char_form,
    connection_curvature,
    ddc,
    first_chern_line,
    fubini_study_line,
    integrate_p1,
    metric_change_datum,
    split_datum,
    verify_downstairs,
)
from chernlab.exact_algebra import (
    GeneratorSet,
    GradedElement,
    UnivariateSeries,
    ge_inverse,
)
from chernlab.rr_engine import (
    err_transfer_O,
    err_transfer_Ominus1,
    euler_characteristic,
    random_tower_case,
    solve_R,
)
from chernlab.spaces import (
    grassmannian_quotient_classes,
    projective_bundle,
    rank2_a_class,
    universal_rank2_base,
)


def _report(label, budget, started, failures):
    elapsed = time.monotonic() - started
    ok = not failures and elapsed < budget
    print(f"{'PASS' if ok else 'FAIL'} {label} ({elapsed:.2f}s, budget {budget:g}s)")
    assert not failures, f"{label}: {failures[:4]}"
    assert elapsed < budget, f"{label}: {elapsed:.2f}s exceeds {budget}s"


def _weight(z):
    # symmetric under z -> 1/z, so the same callable serves both charts
    return 0.3 * z.real / (1.0 + (z * np.conj(z)).real)


def test_01_euler_characteristics_are_exact_binomials():
    started = time.monotonic()
    failures = []
    for n in range(5):
        for k in range(6):
            if euler_characteristic(n, k) != math.comb(n + k, n):
                failures.append(f"chi(P{n},O({k}))")
        for k in range(-n, 0):
            if euler_characteristic(n, k) != 0:
                failures.append(f"chi(P{n},O({k}))")
    _report("exact Euler characteristics of O(k) on P^n", 5, started, failures)


def test_02_centered_class_pushforward_table():
    started = time.monotonic()
    base = universal_rank2_base(8)
    c1 = base.generator("c1")
    c2 = base.generator("c2")
    space, p = projective_bundle(base, FormalBundle(2, base.one() + c1 + c2))
    A = rank2_a_class(p)
    u = base.pow(c1, 2).scale(Fraction(1, 4)) - c2
    failures = []
    if p.pushforward(A).terms != base.one().terms:
        failures.append("A^1")
    for m in (0, 1, 2):
        if p.pushforward(space.pow(A, 2 * m)).terms != {}:
            failures.append(f"A^{2 * m}")
    for m in (1, 2, 3):
        if p.pushforward(space.pow(A, 2 * m + 1)).terms != base.pow(u, m).terms:
            failures.append(f"A^{2 * m + 1}")
    _report("centered class pushforward table at truncation 8", 5, started, failures)


def test_03_quotient_classes_match_series_inverse():
    started = time.monotonic()
    base = universal_rank2_base(8)
    classes = grassmannian_quotient_classes(8, base)
    total = base.zero()
    for q in classes:
        total = total + q
    inverse = ge_inverse(base.one() + base.generator("c1") + base.generator("c2"))
    failures = [] if total.terms == inverse.terms else ["recurrence != inverse"]
    _report("quotient class recurrence equals series inverse, k <= 8", 1, started, failures)


def test_04_power_sums_match_split_roots():
    started = time.monotonic()
    names = ("a", "b", "c", "d")
    failures = []
    for num_roots in (1, 2, 3, 4):
        gens = GeneratorSet(names[:num_roots], (1,) * num_roots)
        roots = [GradedElement.generator(gens, 6, n) for n in names[:num_roots]]
        total = GradedElement.constant(gens, 6, 1)
        for r in roots:
            total = total * (GradedElement.constant(gens, 6, 1) + r)
        computed = power_sums(FormalBundle(num_roots, total), 6)
        for k in range(1, 7):
            brute = GradedElement.zero(gens, 6)
            for r in roots:
                term = GradedElement.constant(gens, 6, 1)
                for _ in range(k):
                    term = term * r
                brute = brute + term
            if computed[k - 1].terms != brute.terms:
                failures.append(f"r={num_roots} s_{k}")
    _report("power sums match brute force, <= 4 roots, weight <= 6", 5, started, failures)


def test_05_tower_identity_vanishes_on_random_configurations():
    started = time.monotonic()
    rng = random.Random(20240815)
    failures = []
    for index in range(10):
        case = random_tower_case(rng)
        result = case.run()
        if not result.passed or result.residual.terms != {}:
            failures.append(f"case {index}: {case.label}")
    _report("tower identity exactly zero on 10 random configurations", 60, started, failures)


def test_06_transfer_solver_round_trips_random_series():
    started = time.monotonic()
    rng = random.Random(1729)
    failures = []
    for trial in range(20):
        degree = rng.randrange(1, 9)
        coeffs = [Fraction(0)] + [
            Fraction(rng.randrange(-6, 7), rng.randrange(1, 5))
            for _ in range(degree)
        ]
        target = UnivariateSeries(coeffs, degree)
        order = max((degree + 1) // 2, 1)
        t_o = err_transfer_O(target, order).series_in_u
        t_o1 = err_transfer_Ominus1(target, order).series_in_u
        sol = solve_R(t_o, t_o1, order)
        recovered = sol.combined()
        for k in range(2 * order + 2):
            if recovered.coefficient(k) != target.coefficient(k):
                failures.append(f"trial {trial} x^{k}")
                break
        if any(sol.r_even.coefficient(k) != 0 for k in range(1, 2 * order + 2, 2)):
            failures.append(f"trial {trial} even parity")
        if any(sol.r_odd.coefficient(k) != 0 for k in range(0, 2 * order + 2, 2)):
            failures.append(f"trial {trial} odd parity")
    _report("transfer solver round trip, 20 random series", 30, started, failures)


def test_07_fubini_study_degrees_integrate_to_k():
    started = time.monotonic()
    grid = ChartGrid(256)
    failures = []
    for k in (1, 2, 3):
        value = integrate_p1(first_chern_line(fubini_study_line(grid, k)))
        if abs(value - k) >= 1e-5:
            failures.append(f"k={k}: {value!r}")
    _report("integral of c_1(O(k), FS^k) within 1e-5 of k", 30, started, failures)


def test_08_two_curvature_paths_agree_pointwise():
    started = time.monotonic()
    grid = ChartGrid(256)
    metric = fubini_study_line(grid, 1)
    direct = first_chern_line(metric)
    via_character = char_form(
        connection_curvature(metric), CharSeries.chern_character()
    ).grade1
    gap = (via_character - direct).max_on_interior()
    failures = [] if gap < 1e-6 else [f"gap {gap:.3e}"]
    _report("log-det and character paths agree within 1e-6", 30, started, failures)


def test_09_downstairs_comparison_converges():
    started = time.monotonic()
    residuals = {}
    for n in (64, 128):
        datum = metric_change_datum(ChartGrid(n), 1, _weight, _weight)
        residuals[n] = verify_downstairs(datum).residual
    failures = []
    if residuals[128] >= 1e-3:
        failures.append(f"residual {residuals[128]:.3e}")
    ratio = residuals[64] / residuals[128]
    if ratio < 1.8:
        failures.append(f"ratio {ratio:.2f}")
    _report("downstairs residual < 1e-3 and shrinking with n", 120, started, failures)


def test_10_split_sequence_secondary_class_vanishes():
    started = time.monotonic()
    grid = ChartGrid(64)
    datum = split_datum(fubini_study_line(grid, 1), fubini_study_line(grid, -1))
    result = bott_chern_numeric(datum)
    size = max(result.grade0.max_on_interior(), result.grade1.max_on_interior())
    failures = [] if size < 1e-8 else [f"norm {size:.3e}"]
    _report("split sequence secondary class below 1e-8", 30, started, failures)


def test_11_cutoff_profiles_share_ddc_image():
    started = time.monotonic()
    datum = metric_change_datum(ChartGrid(96), 1, _weight, _weight)
    res_a = bott_chern_numeric(datum, cutoff=PLATEAU)
    res_b = bott_chern_numeric(datum, cutoff=EXP_CLAMP)
    gap = (ddc(res_a.grade0) - ddc(res_b.grade0)).max_on_interior()
    failures = [] if gap < 1e-3 else [f"gap {gap:.3e}"]
    _report("cutoff choice invisible in the ddc image, 1e-3", 120, started, failures)
