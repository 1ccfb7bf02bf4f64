"""Exact sparse arithmetic for truncated graded rings and power series.

Two algebraic containers live here and everything above them is built from
these:

* ``UnivariateSeries`` -- a univariate power series over the rationals,
  truncated at a fixed order N (coefficients of x^0 .. x^N are stored, all
  higher terms are discarded).  Multiplication is the truncated Cauchy
  product, division is long division (with cancellation of common leading
  zeros), and composition requires the inner series to have zero constant
  term.

* ``GradedElement`` -- an element of a free graded-commutative polynomial
  ring over the rationals with finitely many named generators, each of a
  fixed positive integer weight, truncated above a fixed total weight D.
  Terms are a sparse dict mapping exponent tuples to nonzero ``Fraction``
  coefficients; the zero element is the empty dict.  All generators model
  even cohomology classes, so the ring is honestly commutative.

Coefficients are ``fractions.Fraction`` throughout: exact, automatically in
lowest terms with positive denominator.  No floats enter this module.

Canonical text rendering sorts terms by total weight, then reverse
lexicographically on exponent tuples (graded-lex), e.g. ``1 + 2*h + 1*h^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

Exponent = Tuple[int, ...]
TermDict = Dict[Exponent, Fraction]


class IncompatibleRingError(ValueError):
    """Raised when combining elements of different rings or truncations."""


class SeriesError(ValueError):
    """Raised for invalid power-series operations (division, composition)."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, string like '3/4', or Fraction to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def render_rational(q: Fraction) -> str:
    """Render p/q with positive denominator, omitting '/1'."""
    return str(q)


# ---------------------------------------------------------------------------
# Univariate truncated power series
# ---------------------------------------------------------------------------


class UnivariateSeries:
    """Power series sum_k a_k x^k truncated at a fixed order.

    ``coefficients`` always has length ``order + 1``.  Addition and
    multiplication require equal orders; mismatches raise
    ``IncompatibleRingError`` rather than silently re-truncating.
    """

    __slots__ = ("coefficients", "order")

    def __init__(self, coefficients: Sequence[RationalLike], order: int | None = None):
        coeffs = [as_rational(c) for c in coefficients]
        if order is None:
            if not coeffs:
                raise SeriesError("need either coefficients or an explicit order")
            order = len(coeffs) - 1
        if order < 0:
            raise SeriesError(f"series order must be >= 0, got {order}")
        if len(coeffs) > order + 1:
            raise SeriesError(
                f"{len(coeffs)} coefficients exceed truncation order {order}"
            )
        coeffs.extend([Fraction(0)] * (order + 1 - len(coeffs)))
        self.coefficients: Tuple[Fraction, ...] = tuple(coeffs)
        self.order = order

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(order: int) -> "UnivariateSeries":
        return UnivariateSeries([], order)

    @staticmethod
    def one(order: int) -> "UnivariateSeries":
        return UnivariateSeries([1], order)

    @staticmethod
    def x(order: int) -> "UnivariateSeries":
        return UnivariateSeries([0, 1], order)

    # -- basic protocol -----------------------------------------------------

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k <= self.order:
            return self.coefficients[k]
        return Fraction(0)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None for the zero series."""
        for k, c in enumerate(self.coefficients):
            if c != 0:
                return k
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def constant_term(self) -> Fraction:
        return self.coefficients[0]

    def truncate(self, order: int) -> "UnivariateSeries":
        """Return the same series at a lower (or equal) truncation order."""
        if order > self.order:
            raise SeriesError(
                f"cannot extend truncation {self.order} to {order} without data"
            )
        return UnivariateSeries(self.coefficients[: order + 1], order)

    def _check(self, other: "UnivariateSeries") -> None:
        if not isinstance(other, UnivariateSeries):
            raise TypeError(f"expected UnivariateSeries, got {type(other).__name__}")
        if other.order != self.order:
            raise IncompatibleRingError(
                f"series truncation mismatch: {self.order} vs {other.order}"
            )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, UnivariateSeries)
            and self.order == other.order
            and self.coefficients == other.coefficients
        )

    def __hash__(self) -> int:
        return hash((self.order, self.coefficients))

    def __repr__(self) -> str:
        return f"UnivariateSeries({render_series(self)!r})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "UnivariateSeries") -> "UnivariateSeries":
        self._check(other)
        return UnivariateSeries(
            [a + b for a, b in zip(self.coefficients, other.coefficients)], self.order
        )

    def __sub__(self, other: "UnivariateSeries") -> "UnivariateSeries":
        self._check(other)
        return UnivariateSeries(
            [a - b for a, b in zip(self.coefficients, other.coefficients)], self.order
        )

    def __neg__(self) -> "UnivariateSeries":
        return UnivariateSeries([-a for a in self.coefficients], self.order)

    def scale(self, factor: RationalLike) -> "UnivariateSeries":
        f = as_rational(factor)
        return UnivariateSeries([f * a for a in self.coefficients], self.order)

    def __mul__(self, other: "UnivariateSeries") -> "UnivariateSeries":
        return series_mul(self, other)


def series_mul(a: UnivariateSeries, b: UnivariateSeries) -> UnivariateSeries:
    """Truncated Cauchy product at the common order."""
    a._check(b)
    n = a.order
    out = [Fraction(0)] * (n + 1)
    for i, ca in enumerate(a.coefficients):
        if ca == 0:
            continue
        for j in range(0, n + 1 - i):
            cb = b.coefficients[j]
            if cb != 0:
                out[i + j] += ca * cb
    return UnivariateSeries(out, n)


def series_div(a: UnivariateSeries, b: UnivariateSeries) -> UnivariateSeries:
    """Long division a/b of truncated series.

    If b has valuation m > 0, both series must share the factor x^m; the
    common leading zeros are cancelled formally and the quotient comes back
    at order N - m (the coefficients beyond that are not determined by the
    inputs).  Division by the zero series raises ``SeriesError``.
    """
    a._check(b)
    m = b.valuation()
    if m is None:
        raise SeriesError("division by the zero series")
    va = a.valuation()
    if m > 0:
        if not a.is_zero() and (va is None or va < m):
            raise SeriesError(
                f"quotient is not a power series: numerator valuation "
                f"{va} < denominator valuation {m}"
            )
        n = a.order - m
        num = list(a.coefficients[m:])
        den = list(b.coefficients[m:])
        return series_div(UnivariateSeries(num, n), UnivariateSeries(den, n))
    n = a.order
    inv0 = Fraction(1) / b.coefficients[0]
    out = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        acc = a.coefficients[k]
        for j in range(1, k + 1):
            if b.coefficients[j] != 0:
                acc -= b.coefficients[j] * out[k - j]
        out[k] = acc * inv0
    return UnivariateSeries(out, n)


def series_compose(outer: UnivariateSeries, inner: UnivariateSeries) -> UnivariateSeries:
    """outer(inner(x)) truncated; inner must have zero constant term."""
    outer._check(inner)
    if inner.constant_term() != 0:
        raise SeriesError(
            f"composition needs inner constant term 0, got {inner.constant_term()}"
        )
    n = outer.order
    result = UnivariateSeries.zero(n)
    # Horner evaluation from the top coefficient down.
    for c in reversed(outer.coefficients):
        result = series_mul(result, inner)
        if c != 0:
            result = result + UnivariateSeries([c], n)
    return result


def series_exp(g: UnivariateSeries) -> UnivariateSeries:
    """exp of a series with zero constant term."""
    if g.constant_term() != 0:
        raise SeriesError("series_exp needs zero constant term")
    n = g.order
    result = UnivariateSeries.one(n)
    term = UnivariateSeries.one(n)
    for k in range(1, n + 1):
        term = series_mul(term, g).scale(Fraction(1, k))
        result = result + term
    return result


def series_log(f: UnivariateSeries) -> UnivariateSeries:
    """log of a series with constant term 1."""
    if f.constant_term() != 1:
        raise SeriesError(f"series_log needs constant term 1, got {f.constant_term()}")
    n = f.order
    u = f - UnivariateSeries.one(n)
    result = UnivariateSeries.zero(n)
    power = UnivariateSeries.one(n)
    for k in range(1, n + 1):
        power = series_mul(power, u)
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result


def exp_series(order: int) -> UnivariateSeries:
    """The exponential series 1 + x + x^2/2! + ... at the given order."""
    fact = Fraction(1)
    coeffs = [Fraction(1)]
    for k in range(1, order + 1):
        fact *= k
        coeffs.append(Fraction(1) / fact)
    return UnivariateSeries(coeffs, order)


def todd_series(order: int) -> UnivariateSeries:
    """x / (1 - e^{-x}) at the given order, by long division.

    The denominator is built at order + 1 so that after cancelling the
    common factor x the quotient is fully determined at ``order``.
    """
    n = order + 1
    em = series_compose(exp_series(n), UnivariateSeries.x(n).scale(-1))
    denom = UnivariateSeries.one(n) - em
    numer = UnivariateSeries.x(n)
    return series_div(numer, denom)


def render_series(s: UnivariateSeries, variable: str = "x") -> str:
    """Canonical rendering, constant first: '1 + 1/2*x + 1/12*x^2'."""
    parts = []
    for k, c in enumerate(s.coefficients):
        if c == 0:
            continue
        if k == 0:
            parts.append((c < 0, render_rational(abs(c))))
        else:
            mono = variable if k == 1 else f"{variable}^{k}"
            parts.append((c < 0, f"{render_rational(abs(c))}*{mono}"))
    if not parts:
        return "0"
    pieces = []
    for i, (neg, text) in enumerate(parts):
        if i == 0:
            pieces.append(f"-{text}" if neg else text)
        else:
            pieces.append(f"- {text}" if neg else f"+ {text}")
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# Graded-commutative truncated polynomial rings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSet:
    """Named ring generators with positive integer weights."""

    names: Tuple[str, ...]
    weights: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.weights):
            raise ValueError("names and weights must have equal length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names in {self.names}")
        for name, w in zip(self.names, self.weights):
            if w < 1:
                raise ValueError(f"generator {name!r} has non-positive weight {w}")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no generator named {name!r} in {self.names}") from None

    def weight_of(self, exponent: Exponent) -> int:
        return sum(e * w for e, w in zip(exponent, self.weights))


def _grlex_key(gens: GeneratorSet, exponent: Exponent) -> Tuple[int, Tuple[int, ...]]:
    # Ascending total weight; within a weight, higher powers of earlier
    # generators come first (reverse lexicographic on the exponent tuple).
    return (gens.weight_of(exponent), tuple(-e for e in exponent))


class GradedElement:
    """Sparse element of a truncated free graded-commutative ring."""

    __slots__ = ("generators", "truncation", "terms")

    def __init__(
        self,
        generators: GeneratorSet,
        truncation: int,
        terms: Mapping[Exponent, RationalLike] | None = None,
    ):
        if truncation < 0:
            raise ValueError(f"truncation must be >= 0, got {truncation}")
        self.generators = generators
        self.truncation = truncation
        clean: TermDict = {}
        if terms:
            ngens = len(generators)
            for exponent, coeff in terms.items():
                exponent = tuple(exponent)
                if len(exponent) != ngens:
                    raise ValueError(
                        f"exponent {exponent} has wrong arity for {generators.names}"
                    )
                if any(e < 0 for e in exponent):
                    raise ValueError(f"negative exponent in {exponent}")
                if generators.weight_of(exponent) > truncation:
                    continue
                q = as_rational(coeff)
                if q == 0:
                    continue
                clean[exponent] = clean.get(exponent, Fraction(0)) + q
                if clean[exponent] == 0:
                    del clean[exponent]
        self.terms: TermDict = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(
        generators: GeneratorSet, truncation: int, value: RationalLike
    ) -> "GradedElement":
        zero = (0,) * len(generators)
        return GradedElement(generators, truncation, {zero: as_rational(value)})

    @staticmethod
    def zero(generators: GeneratorSet, truncation: int) -> "GradedElement":
        return GradedElement(generators, truncation, {})

    @staticmethod
    def generator(
        generators: GeneratorSet, truncation: int, name: str
    ) -> "GradedElement":
        i = generators.index(name)
        exponent = tuple(1 if j == i else 0 for j in range(len(generators)))
        return GradedElement(generators, truncation, {exponent: 1})

    # -- protocol ------------------------------------------------------------

    def _check(self, other: "GradedElement") -> None:
        if not isinstance(other, GradedElement):
            raise TypeError(f"expected GradedElement, got {type(other).__name__}")
        if other.generators != self.generators:
            raise IncompatibleRingError(
                f"generator sets differ: {self.generators.names} vs "
                f"{other.generators.names}"
            )
        if other.truncation != self.truncation:
            raise IncompatibleRingError(
                f"truncation mismatch: {self.truncation} vs {other.truncation}"
            )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GradedElement)
            and self.generators == other.generators
            and self.truncation == other.truncation
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash(
            (self.generators, self.truncation, tuple(sorted(self.terms.items())))
        )

    def __repr__(self) -> str:
        return f"GradedElement({render_graded(self)!r})"

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.generators), Fraction(0))

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def iter_terms(self) -> Iterator[Tuple[Exponent, Fraction]]:
        for exponent in sorted(self.terms, key=lambda e: _grlex_key(self.generators, e)):
            yield exponent, self.terms[exponent]

    def max_weight(self) -> int:
        if not self.terms:
            return 0
        return max(self.generators.weight_of(e) for e in self.terms)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check(other)
        out = dict(self.terms)
        for exponent, coeff in other.terms.items():
            acc = out.get(exponent, Fraction(0)) + coeff
            if acc == 0:
                out.pop(exponent, None)
            else:
                out[exponent] = acc
        result = GradedElement(self.generators, self.truncation)
        result.terms = out
        return result

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __neg__(self) -> "GradedElement":
        result = GradedElement(self.generators, self.truncation)
        result.terms = {e: -c for e, c in self.terms.items()}
        return result

    def scale(self, factor: RationalLike) -> "GradedElement":
        f = as_rational(factor)
        result = GradedElement(self.generators, self.truncation)
        if f != 0:
            result.terms = {e: f * c for e, c in self.terms.items()}
        return result

    def __mul__(self, other: "GradedElement") -> "GradedElement":
        self._check(other)
        gens = self.generators
        cap = self.truncation
        weights = {e: gens.weight_of(e) for e in self.terms}
        out: TermDict = {}
        for ea, ca in self.terms.items():
            wa = weights[ea]
            for eb, cb in other.terms.items():
                if wa + gens.weight_of(eb) > cap:
                    continue
                key = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(key, Fraction(0)) + ca * cb
                if acc == 0:
                    out.pop(key, None)
                else:
                    out[key] = acc
        result = GradedElement(gens, cap)
        result.terms = out
        return result

    def __pow__(self, n: int) -> "GradedElement":
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"graded elements support non-negative integer powers, got {n}")
        result = GradedElement.constant(self.generators, self.truncation, 1)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def grade_part(self, k: int) -> "GradedElement":
        """The homogeneous component of total weight k."""
        gens = self.generators
        result = GradedElement(gens, self.truncation)
        result.terms = {
            e: c for e, c in self.terms.items() if gens.weight_of(e) == k
        }
        return result

    def grade_range(self, lo: int, hi: int) -> "GradedElement":
        gens = self.generators
        result = GradedElement(gens, self.truncation)
        result.terms = {
            e: c for e, c in self.terms.items() if lo <= gens.weight_of(e) <= hi
        }
        return result


def ge_exp(a: GradedElement) -> GradedElement:
    """exp of an element with zero constant term (nilpotent by truncation)."""
    if a.constant_term() != 0:
        raise ValueError("ge_exp needs zero constant term")
    result = GradedElement.constant(a.generators, a.truncation, 1)
    term = GradedElement.constant(a.generators, a.truncation, 1)
    for k in range(1, a.truncation + 1):
        term = (term * a).scale(Fraction(1, k))
        if term.is_zero():
            break
        result = result + term
    return result


def ge_inverse(a: GradedElement) -> GradedElement:
    """Multiplicative inverse of an element with nonzero constant term."""
    c0 = a.constant_term()
    if c0 == 0:
        raise ValueError("cannot invert a graded element with zero constant term")
    one = GradedElement.constant(a.generators, a.truncation, 1)
    u = one - a.scale(Fraction(1) / c0)  # zero constant term
    result = one
    power = one
    for _ in range(a.truncation):
        power = power * u
        if power.is_zero():
            break
        result = result + power
    return result.scale(Fraction(1) / c0)


def ge_evaluate_series(s: UnivariateSeries, a: GradedElement) -> GradedElement:
    """Substitute a graded element with zero constant term into a series."""
    if a.constant_term() != 0:
        raise ValueError("series substitution needs zero constant term")
    result = GradedElement.zero(a.generators, a.truncation)
    # Horner from the top; series coefficients beyond the ring truncation
    # cannot contribute.
    top = min(s.order, a.truncation)
    for k in range(top, -1, -1):
        result = result * a
        c = s.coefficient(k)
        if c != 0:
            result = result + GradedElement.constant(a.generators, a.truncation, c)
    return result


def render_graded(a: GradedElement) -> str:
    """Canonical graded-lex rendering, e.g. '1 + 2*h + 1*h^2'."""
    if a.is_zero():
        return "0"
    names = a.generators.names
    parts = []
    for exponent, coeff in a.iter_terms():
        factors = []
        for name, e in zip(names, exponent):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if factors:
            text = f"{render_rational(abs(coeff))}*" + "*".join(factors)
        else:
            text = render_rational(abs(coeff))
        parts.append((coeff < 0, text))
    pieces = []
    for i, (neg, text) in enumerate(parts):
        if i == 0:
            pieces.append(f"-{text}" if neg else text)
        else:
            pieces.append(f"- {text}" if neg else f"+ {text}")
    return " ".join(pieces)
