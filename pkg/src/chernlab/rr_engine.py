"""Riemann-Roch style checks and the error-transfer calculus.

Contents:

* ``euler_characteristic(n, k)`` -- the exact integral over P^n of
  ch(O(k)) td(T), which must reproduce binom(n+k, n) for k >= -n.

* ``tower_identity_check`` -- for a two-stage tower of projective bundles
  X -> Z -> Y, verifies the exact push-forward identity obeyed by the
  perturbed character  ch(E) td(T) P(T)  when the direct image character is
  *defined* as  ch(f_! E) := f_*(ch(E) td(T_f)).  The identity is an exact
  rational computation; the residual must vanish identically.

* ``err_transfer_O`` / ``err_transfer_Ominus1`` -- the two transfer
  operators on additive-class series.  Working on the P^1-bundle of the
  tautological rank-2 bundle S over the universal base, with A the centered
  hyperplane class (A = xi - c_1/2), they push forward

      (2A / (1 - e^{-2A})) P'(2A)          for the trivial line bundle,
      (2A e^{-A} / (1 - e^{-2A})) P'(2A)    for O(-1),

  and express the result in u = (1/4) c_1^2 - c_2.  The push-forward uses
  the honest Segre rule on the modeled ring (the closed-form odd/even power
  table is a theorem to be tested against it, not an input).  The second
  factor equals A / sinh A, an even series, so even P' is annihilated.

* ``solve_R`` -- recovers the unique series R = R_even + R_odd with zero
  constant term achieving prescribed images under both operators, solving
  triangularly order by order (odd part first from the O(-1) equation, then
  the even part from the O equation).  The u^0 coefficient of the O target
  is determined by the odd part; an inconsistent pair of targets raises
  ``NoSolutionError`` carrying the failing order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .char_classes import CharSeries, FormalBundle, apply_class
from .exact_algebra import (
    Fraction as _Fraction,
    GradedElement,
    UnivariateSeries,
    exp_series,
    series_compose,
    series_mul,
    todd_series,
)
from .spaces import (
    MapModel,
    SpaceModel,
    compose_maps,
    projective_bundle,
    projective_space,
    rank2_a_class,
    universal_rank2_base,
)


class WellDefinednessError(ArithmeticError):
    """A pushed class failed to lie in the expected subring."""


class NoSolutionError(ValueError):
    """No series satisfies the prescribed transfer targets."""

    def __init__(self, message: str, failing_order: int):
        super().__init__(message)
        self.failing_order = failing_order


# ---------------------------------------------------------------------------
# Euler characteristics on projective space
# ---------------------------------------------------------------------------


def euler_characteristic(n: int, k: int) -> Fraction:
    """integral over P^n of ch(O(k)) td(T  P^n), exact."""
    from .spaces import projective_space

    space = projective_space(n)
    if n == 0:
        return Fraction(1)
    h = space.generator("h")
    line = space.line_bundle(h.scale(k))
    ch = apply_class(CharSeries.chern_character(), line)
    td = apply_class(CharSeries.todd(), space.tangent)
    return space.integrate(ch * td)


def hrr_expected(n: int, k: int) -> int:
    """binom(n+k, n); zero in the range -n <= k <= -1."""
    if n + k < 0:
        raise ValueError(f"no closed-form anchor for k < -n (n={n}, k={k})")
    return math.comb(n + k, n)


def hrr_table(max_n: int, max_k: int) -> List[Tuple[int, int, Fraction, int, bool]]:
    """Rows (n, k, computed, expected, match) for 0<=n<=max_n, -n<=k<=max_k."""
    rows = []
    for n in range(0, max_n + 1):
        for k in range(-n, max_k + 1):
            chi = euler_characteristic(n, k)
            expected = hrr_expected(n, k)
            rows.append((n, k, chi, expected, chi == expected))
    return rows


# ---------------------------------------------------------------------------
# Tower identity
# ---------------------------------------------------------------------------


@dataclass
class TowerCheckResult:
    passed: bool
    residual: GradedElement
    lhs: GradedElement
    rhs: GradedElement


BundleBuilder = Callable[[SpaceModel, MapModel, MapModel], FormalBundle]


def tower_identity_check(
    base: SpaceModel,
    P: UnivariateSeries,
    F: FormalBundle,
    Fprime: FormalBundle,
    E_builder: BundleBuilder,
) -> TowerCheckResult:
    """Check the composite push-forward identity on X = P(F') -> Z = P(F) -> Y.

    Both F and F' live on the base Y; F' is pulled back to Z before forming
    X.  The left side pushes ch(E) td(T) P(T) down the composite in one
    step; the right side uses the defined direct-image character on Z plus
    the transported correction term.  Exact equality is required.
    """
    if P.constant_term() != 0:
        raise ValueError("additive perturbation series must have zero constant term")
    Z, g = projective_bundle(base, F)
    X, f = projective_bundle(Z, g.pullback_bundle(Fprime))
    gf = compose_maps(g, f)

    E = E_builder(X, f, g)
    X._require(E.chern)

    todd_cls = CharSeries.todd()
    add_cls = CharSeries.additive(P)
    ch_cls = CharSeries.chern_character()

    ch_E = X.reduce(apply_class(ch_cls, E))
    td_f = X.reduce(apply_class(todd_cls, f.relative_tangent))
    td_gf = X.reduce(apply_class(todd_cls, gf.relative_tangent))
    P_f = X.reduce(apply_class(add_cls, f.relative_tangent))
    P_gf = X.reduce(apply_class(add_cls, gf.relative_tangent))
    td_g = Z.reduce(apply_class(todd_cls, g.relative_tangent))
    P_g = Z.reduce(apply_class(add_cls, g.relative_tangent))

    lhs = gf.pushforward(X.mul(X.mul(ch_E, td_gf), P_gf))

    ch_direct_image = f.pushforward(X.mul(ch_E, td_f))  # GRR as a definition
    rhs_main = g.pushforward(Z.mul(Z.mul(ch_direct_image, td_g), P_g))
    correction = g.pushforward(
        Z.mul(f.pushforward(X.mul(X.mul(ch_E, td_f), P_f)), td_g)
    )
    rhs = rhs_main + correction

    residual = base.reduce(lhs - rhs)
    return TowerCheckResult(residual.is_zero(), residual, lhs, rhs)


# ---------------------------------------------------------------------------
# Error-transfer operators
# ---------------------------------------------------------------------------


@dataclass
class ErrOperatorResult:
    which: str
    series_in_u: UnivariateSeries


@dataclass
class RSolution:
    r_even: UnivariateSeries
    r_odd: UnivariateSeries
    order: int

    def combined(self) -> UnivariateSeries:
        return self.r_even + self.r_odd


class _ErrWorkspace:
    """P(S) over the universal rank-2 base, with cached A-power pushes.

    For a u-series result of order N the base ring is truncated at 2N and
    the bundle ring at 2N + 1, enough to push A^{2N+1}.
    """

    def __init__(self, u_order: int):
        self.u_order = u_order
        self.base = universal_rank2_base(2 * u_order)
        S: FormalBundle = self.base.tautological  # type: ignore[attr-defined]
        self.space, self.pmap = projective_bundle(self.base, S)
        self.A = rank2_a_class(self.pmap)
        c1 = self.base.generator("c1")
        c2 = self.base.generator("c2")
        self.u = (c1 * c1).scale(Fraction(1, 4)) - c2

        self.max_degree = 2 * u_order + 1
        self.pushed_A_powers: List[GradedElement] = []
        ak = self.space.one()
        for _ in range(0, self.max_degree + 1):
            self.pushed_A_powers.append(self.pmap.pushforward(ak))
            ak = self.space.mul(ak, self.A)

        self.u_powers: List[GradedElement] = [self.base.one()]
        for _ in range(1, u_order + 1):
            self.u_powers.append(self.u_powers[-1] * self.u)

    def push_polynomial(self, coeffs: List[Fraction]) -> GradedElement:
        """Push sum_k coeffs[k] A^k via the cached per-power pushes."""
        out = self.base.zero()
        for k, c in enumerate(coeffs):
            if c != 0 and k < len(self.pushed_A_powers):
                out = out + self.pushed_A_powers[k].scale(c)
        return out

    def extract_u_series(self, elem: GradedElement) -> UnivariateSeries:
        """Express an element of the base ring as a polynomial in u.

        Triangular from the top: u^m is the only power contributing the
        pure monomial c2^m, with coefficient (-1)^m.  A nonzero remainder
        means the element is not in the u-subring.
        """
        coeffs = [Fraction(0)] * (self.u_order + 1)
        residue = elem
        for m in range(self.u_order, -1, -1):
            expo = (0, m)
            am = residue.coefficient(expo) * Fraction((-1) ** m)
            if am != 0:
                coeffs[m] = am
                residue = residue - self.u_powers[m].scale(am)
        if not residue.is_zero():
            from .exact_algebra import render_graded

            raise WellDefinednessError(
                "pushed class is not a polynomial in u = 1/4*c1^2 - c2; "
                f"remainder {render_graded(residue)}"
            )
        return UnivariateSeries(coeffs, self.u_order)


_workspace_cache: Dict[int, _ErrWorkspace] = {}


def _workspace(u_order: int) -> _ErrWorkspace:
    ws = _workspace_cache.get(u_order)
    if ws is None:
        ws = _ErrWorkspace(u_order)
        _workspace_cache[u_order] = ws
    return ws


def _factor_series(which: str, degree: int) -> UnivariateSeries:
    """The transfer factor as a series in A, at the given truncation."""
    two_x = UnivariateSeries.x(degree).scale(2)
    todd_2a = series_compose(todd_series(degree), two_x)
    if which == "O":
        return todd_2a
    if which == "O-1":
        exp_minus = series_compose(exp_series(degree), UnivariateSeries.x(degree).scale(-1))
        return series_mul(todd_2a, exp_minus)
    raise ValueError(f"unknown transfer twist {which!r}; expected 'O' or 'O-1'")


def _integrand_coefficients(
    which: str, pprime: UnivariateSeries, degree: int
) -> List[Fraction]:
    """Coefficients of factor(A) * P'(2A) up to A^degree."""
    factor = _factor_series(which, degree)
    out = [Fraction(0)] * (degree + 1)
    for j in range(0, min(pprime.order, degree) + 1):
        pj = pprime.coefficient(j)
        if pj == 0:
            continue
        scaled = pj * Fraction(2) ** j
        for i in range(0, degree + 1 - j):
            fi = factor.coefficient(i)
            if fi != 0:
                out[i + j] += fi * scaled
    return out


def _err_transfer(which: str, pprime: UnivariateSeries, order: int) -> ErrOperatorResult:
    if order < 0:
        raise ValueError(f"u-order must be >= 0, got {order}")
    ws = _workspace(order)
    coeffs = _integrand_coefficients(which, pprime, ws.max_degree)
    pushed = ws.push_polynomial(coeffs)
    return ErrOperatorResult(which, ws.extract_u_series(pushed))


def err_transfer_O(pprime: UnivariateSeries, order: int) -> ErrOperatorResult:
    """Push (2A/(1-e^{-2A})) P'(2A) down P(S) and express in u."""
    return _err_transfer("O", pprime, order)


def err_transfer_Ominus1(pprime: UnivariateSeries, order: int) -> ErrOperatorResult:
    """Push (2A e^{-A}/(1-e^{-2A})) P'(2A) down P(S) and express in u."""
    return _err_transfer("O-1", pprime, order)


# ---------------------------------------------------------------------------
# Solving for R
# ---------------------------------------------------------------------------


def _basis_images(which: str, u_order: int) -> Dict[int, UnivariateSeries]:
    """Images of the monomials x^j, 1 <= j <= 2 u_order + 1, as u-series."""
    degree = 2 * u_order + 1
    images = {}
    for j in range(1, degree + 1):
        mono = UnivariateSeries([0] * j + [1], degree)
        images[j] = _err_transfer(which, mono, u_order).series_in_u
    return images


def solve_R(
    target_O: UnivariateSeries,
    target_Ominus1: UnivariateSeries,
    order: int,
) -> RSolution:
    """Find R (zero constant term) with prescribed images, to u-order ``order``.

    Coefficients come back for x^1 .. x^{2*order+1}.  The odd part is fixed
    by the O(-1) target alone (even monomials push to zero there); the even
    part then follows from the O target.  At each stage the leading factor
    is asserted nonzero before dividing.
    """
    n = order
    if target_O.order < n or target_Ominus1.order < n:
        raise ValueError(
            f"targets must be given at least to u-order {n} "
            f"(got {target_O.order} and {target_Ominus1.order})"
        )
    degree = 2 * n + 1
    img_o = _basis_images("O", n)
    img_o1 = _basis_images("O-1", n)

    for j in range(2, degree + 1, 2):
        if not img_o1[j].is_zero():
            raise WellDefinednessError(
                f"parity violation: O(-1) image of x^{j} should vanish"
            )

    r: Dict[int, Fraction] = {}

    for m in range(0, n + 1):
        j = 2 * m + 1
        acc = target_Ominus1.coefficient(m)
        for jp in range(1, j, 2):
            acc -= r[jp] * img_o1[jp].coefficient(m)
        lead = img_o1[j].coefficient(m)
        if lead == 0:
            raise NoSolutionError(
                f"vanishing leading factor for x^{j} in the O(-1) transfer", m
            )
        r[j] = acc / lead

    for m in range(0, n + 1):
        known = Fraction(0)
        for jp in range(1, degree + 1, 2):
            known += r[jp] * img_o[jp].coefficient(m)
        for jp in range(2, 2 * m, 2):
            known += r[jp] * img_o[jp].coefficient(m)
        if m == 0:
            if known != target_O.coefficient(0):
                raise NoSolutionError(
                    "inconsistent targets: the u^0 coefficient of the O target "
                    f"is forced to {known} by the O(-1) target, "
                    f"got {target_O.coefficient(0)}",
                    0,
                )
            continue
        j = 2 * m
        lead = img_o[j].coefficient(m)
        if lead == 0:
            raise NoSolutionError(
                f"vanishing leading factor for x^{j} in the O transfer", m
            )
        r[j] = (target_O.coefficient(m) - known) / lead

    even = [Fraction(0)] * (degree + 1)
    odd = [Fraction(0)] * (degree + 1)
    for j, val in r.items():
        if j % 2 == 0:
            even[j] = val
        else:
            odd[j] = val
    return RSolution(
        UnivariateSeries(even, degree), UnivariateSeries(odd, degree), degree
    )


# ---------------------------------------------------------------------------
# Randomized tower configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TowerCase:
    """One randomized instance of the two-stage push-forward identity.

    The sampled menu: base P^2 or the universal rank-2 ring truncated at 6,
    bundle ranks up to 3, perturbation series of degree up to 5, and the
    bundle carried through the tower one of O, O(1), O(-1), or a rank-2
    bundle mixing the two fiber classes.
    """

    label: str
    base: SpaceModel
    P: UnivariateSeries
    F: FormalBundle
    Fprime: FormalBundle
    E_builder: BundleBuilder
    description: Dict[str, object]

    def run(self) -> TowerCheckResult:
        return tower_identity_check(self.base, self.P, self.F, self.Fprime, self.E_builder)


_COEFF_POOL = (
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(-2),
    Fraction(1, 2),
    Fraction(-1, 3),
    Fraction(3),
)


def _random_bundle(rng, space: SpaceModel, rank: int) -> Tuple[FormalBundle, List[str]]:
    """A random bundle of the given rank with small rational Chern classes."""
    total = space.one()
    coeff_log: List[str] = []
    if space.generators.names == ("h",):
        h = space.generator("h")
        basis_by_weight = {w: [space.pow(h, w)] for w in range(1, space.truncation + 1)}
    else:
        c1 = space.generator("c1")
        c2 = space.generator("c2")
        basis_by_weight = {
            1: [c1],
            2: [c2, space.pow(c1, 2)],
            3: [space.mul(c1, c2), space.pow(c1, 3)],
        }
    for i in range(1, rank + 1):
        part = space.zero()
        for basis_elem in basis_by_weight.get(i, []):
            q = _COEFF_POOL[rng.randrange(len(_COEFF_POOL))]
            coeff_log.append(str(q))
            if q:
                part = part + basis_elem.scale(q)
        total = total + part
    return FormalBundle(rank, total), coeff_log


def _named_e_builder(kind: str, mix: Tuple[Fraction, Fraction, Fraction]) -> BundleBuilder:
    def build(X: SpaceModel, f: MapModel, g: MapModel) -> FormalBundle:
        if kind == "O":
            return X.trivial_bundle(1)
        xi_x = X.generator(f.fiber_name)  # type: ignore[attr-defined]
        if kind == "O(1)":
            return X.line_bundle(xi_x)
        if kind == "O(-1)":
            return X.line_bundle(xi_x.scale(-1))
        xi_z = f.pullback(f.target.generator(g.fiber_name))  # type: ignore[attr-defined]
        a, b, c = mix
        c1 = xi_x.scale(a) + xi_z.scale(b)
        c2 = X.mul(xi_x, xi_z).scale(c)
        return FormalBundle(2, X.one() + c1 + c2)

    return build


def random_tower_case(rng) -> TowerCase:
    """Draw one configuration from the randomized tower-check menu."""
    if rng.randrange(2) == 0:
        base = projective_space(2)
        base_name = "P2"
    else:
        base = universal_rank2_base(6)
        base_name = "universal2(6)"

    degree = rng.randrange(1, 6)
    p_coeffs = [Fraction(0)]
    for _ in range(degree):
        p_coeffs.append(_COEFF_POOL[rng.randrange(len(_COEFF_POOL))])
    if all(q == 0 for q in p_coeffs):
        p_coeffs[1] = Fraction(1)
    P = UnivariateSeries(p_coeffs, degree)

    rank_f = rng.randrange(1, 4)
    rank_fp = rng.randrange(1, 4)
    F, f_log = _random_bundle(rng, base, rank_f)
    Fprime, fp_log = _random_bundle(rng, base, rank_fp)

    e_kind = ("O", "O(1)", "O(-1)", "rank2")[rng.randrange(4)]
    mix = tuple(
        _COEFF_POOL[rng.randrange(len(_COEFF_POOL))] for _ in range(3)
    )
    builder = _named_e_builder(e_kind, mix)  # type: ignore[arg-type]

    description: Dict[str, object] = {
        "base": base_name,
        "p_coefficients": [str(q) for q in p_coeffs],
        "rank_f": rank_f,
        "rank_fprime": rank_fp,
        "f_chern": f_log,
        "fprime_chern": fp_log,
        "e_kind": e_kind,
    }
    if e_kind == "rank2":
        description["e_mix"] = [str(q) for q in mix]
    label = (
        f"{base_name}, ranks ({rank_f},{rank_fp}), P degree {degree}, E = {e_kind}"
    )
    return TowerCase(label, base, P, F, Fprime, builder, description)
