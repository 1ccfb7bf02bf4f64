"""Characteristic classes of formal bundles via Newton's identities.

A ``FormalBundle`` is a virtual bundle presented by its integer rank and its
total Chern class (a graded element with constant term 1) in some ambient
ring.  Chern roots never appear explicitly: power sums s_k are produced from
the Chern classes by Newton's identities, and both additive and
multiplicative characteristic classes are evaluated through them.

With c(E) = prod(1 + x_i):

    s_k = c_1 s_{k-1} - c_2 s_{k-2} + ... + (-1)^{k-1} k c_k

An additive class with zero-constant-term series P maps E to
sum_k P_k s_k(E); a multiplicative class with unit-constant-term series f
maps E to exp(sum_k (log f)_k s_k(E)).  Both are therefore defined for
virtual bundles of any integer rank.  The Chern character is
rank + sum_{k>=1} s_k / k!, and the Todd class is the multiplicative class
of x / (1 - e^{-x}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Literal, Optional, Sequence

from .exact_algebra import (
    GradedElement,
    RationalLike,
    UnivariateSeries,
    as_rational,
    ge_evaluate_series,
    ge_exp,
    ge_inverse,
    series_log,
    todd_series,
)


@dataclass(frozen=True)
class CharSeries:
    """A characteristic class: its transform kind plus defining series.

    kinds:
      ``chern_character``  -- no series needed
      ``todd``             -- no series needed
      ``additive``         -- series with constant term 0
      ``multiplicative``   -- series with constant term 1
    """

    kind: Literal["chern_character", "todd", "additive", "multiplicative"]
    series: Optional[UnivariateSeries] = None

    def __post_init__(self) -> None:
        if self.kind in ("additive", "multiplicative"):
            if self.series is None:
                raise ValueError(f"{self.kind} class needs a defining series")
            c0 = self.series.constant_term()
            if self.kind == "additive" and c0 != 0:
                raise ValueError(f"additive class needs constant term 0, got {c0}")
            if self.kind == "multiplicative" and c0 != 1:
                raise ValueError(f"multiplicative class needs constant term 1, got {c0}")
        elif self.series is not None:
            raise ValueError(f"{self.kind} does not take a series")

    @staticmethod
    def chern_character() -> "CharSeries":
        return CharSeries("chern_character")

    @staticmethod
    def todd() -> "CharSeries":
        return CharSeries("todd")

    @staticmethod
    def additive(series: UnivariateSeries) -> "CharSeries":
        return CharSeries("additive", series)

    @staticmethod
    def multiplicative(series: UnivariateSeries) -> "CharSeries":
        return CharSeries("multiplicative", series)


class FormalBundle:
    """Virtual bundle: integer rank + total Chern class with constant term 1."""

    __slots__ = ("rank", "chern")

    def __init__(self, rank: int, chern: GradedElement):
        if chern.constant_term() != 1:
            raise ValueError(
                f"total Chern class must have constant term 1, got {chern.constant_term()}"
            )
        self.rank = rank
        self.chern = chern

    def __repr__(self) -> str:
        from .exact_algebra import render_graded

        return f"FormalBundle(rank={self.rank}, c={render_graded(self.chern)!r})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FormalBundle)
            and self.rank == other.rank
            and self.chern == other.chern
        )

    def chern_class(self, i: int) -> GradedElement:
        """The weight-i component c_i of the total Chern class."""
        return self.chern.grade_part(i)

    @staticmethod
    def trivial(ring_gens, truncation: int, rank: int = 1) -> "FormalBundle":
        return FormalBundle(
            rank, GradedElement.constant(ring_gens, truncation, 1)
        )

    @staticmethod
    def line(c1: GradedElement) -> "FormalBundle":
        one = GradedElement.constant(c1.generators, c1.truncation, 1)
        return FormalBundle(1, one + c1)


def bundle_sum(a: FormalBundle, b: FormalBundle) -> FormalBundle:
    """Whitney sum: ranks add, total Chern classes multiply."""
    return FormalBundle(a.rank + b.rank, a.chern * b.chern)


def bundle_difference(a: FormalBundle, b: FormalBundle) -> FormalBundle:
    """Virtual difference a - b; Chern class divides (b.chern is a unit)."""
    return FormalBundle(a.rank - b.rank, a.chern * ge_inverse(b.chern))


def bundle_dual(a: FormalBundle) -> FormalBundle:
    """Dual bundle: c_i -> (-1)^i c_i, rank unchanged."""
    gens = a.chern.generators
    out = GradedElement(gens, a.chern.truncation)
    out.terms = {
        e: (c if gens.weight_of(e) % 2 == 0 else -c)
        for e, c in a.chern.terms.items()
    }
    return FormalBundle(a.rank, out)


def twist_by_line(a: FormalBundle, ell: GradedElement) -> FormalBundle:
    """Tensor by a line bundle with first Chern class ell (pure weight 1).

    c_k(E (x) L) = sum_i binom(rank - i, k - i) c_i(E) ell^{k-i}; for rank 2
    this is c_1 -> c_1 + 2 ell and c_2 -> c_2 + ell (c_1 + ell).
    """
    if a.rank < 0:
        raise ValueError(f"twist_by_line needs rank >= 0, got {a.rank}")
    if not ell.is_zero() and (ell.grade_part(1) != ell):
        raise ValueError("twist class must be homogeneous of weight 1")
    gens = a.chern.generators
    cap = a.chern.truncation
    r = a.rank
    total = GradedElement.zero(gens, cap)
    ell_powers: List[GradedElement] = [GradedElement.constant(gens, cap, 1)]
    for _ in range(min(r, cap)):
        ell_powers.append(ell_powers[-1] * ell)
    for i in range(0, r + 1):
        ci = a.chern.grade_part(i)
        if ci.is_zero():
            continue
        for k in range(i, r + 1):
            if k - i >= len(ell_powers):
                break
            coeff = _binomial(r - i, k - i)
            if coeff == 0:
                continue
            total = total + (ci * ell_powers[k - i]).scale(coeff)
    return FormalBundle(r, total)


def _binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for j in range(k):
        out = out * (n - j) // (j + 1)
    return out


def power_sums(a: FormalBundle, max_weight: int) -> List[GradedElement]:
    """Newton power sums [s_1, ..., s_max] from the Chern classes.

    Depends only on the total Chern class, so it is well defined for virtual
    bundles; s_k is homogeneous of weight k.
    """
    gens = a.chern.generators
    cap = a.chern.truncation
    cs = [a.chern.grade_part(i) for i in range(0, max_weight + 1)]
    out: List[GradedElement] = []
    for k in range(1, max_weight + 1):
        acc = cs[k].scale(Fraction((-1) ** (k - 1) * k))
        for i in range(1, k):
            term = cs[i] * out[k - i - 1]
            acc = acc + term.scale(Fraction((-1) ** (i - 1)))
        out.append(acc)
    return out


def apply_class(phi: CharSeries, a: FormalBundle) -> GradedElement:
    """Evaluate the characteristic class phi on the bundle a."""
    gens = a.chern.generators
    cap = a.chern.truncation
    if phi.kind == "chern_character":
        s = power_sums(a, cap)
        result = GradedElement.constant(gens, cap, a.rank)
        fact = Fraction(1)
        for k in range(1, cap + 1):
            fact *= k
            result = result + s[k - 1].scale(Fraction(1) / fact)
        return result
    if phi.kind == "additive":
        series = phi.series
        assert series is not None
        top = min(cap, series.order)
        s = power_sums(a, top)
        result = GradedElement.zero(gens, cap)
        for k in range(1, top + 1):
            c = series.coefficient(k)
            if c != 0:
                result = result + s[k - 1].scale(c)
        return result
    if phi.kind == "todd":
        f = todd_series(cap)
        return _apply_multiplicative(f, a)
    if phi.kind == "multiplicative":
        series = phi.series
        assert series is not None
        if series.order < cap:
            raise ValueError(
                f"multiplicative series order {series.order} below ring truncation {cap}"
            )
        return _apply_multiplicative(series.truncate(cap), a)
    raise ValueError(f"unknown CharSeries kind {phi.kind!r}")


def _apply_multiplicative(f: UnivariateSeries, a: FormalBundle) -> GradedElement:
    gens = a.chern.generators
    cap = a.chern.truncation
    logf = series_log(f)
    s = power_sums(a, cap)
    arg = GradedElement.zero(gens, cap)
    for k in range(1, cap + 1):
        c = logf.coefficient(k)
        if c != 0:
            arg = arg + s[k - 1].scale(c)
    return ge_exp(arg)


def chern_character(a: FormalBundle) -> GradedElement:
    return apply_class(CharSeries.chern_character(), a)


def todd_class(a: FormalBundle) -> GradedElement:
    return apply_class(CharSeries.todd(), a)


def evaluate_series_at_root(s: UnivariateSeries, root: GradedElement) -> GradedElement:
    """Helper for split-bundle oracles: f(x_i) for an explicit root class."""
    return ge_evaluate_series(s, root)
