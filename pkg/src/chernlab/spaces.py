"""Modeled cohomology rings of spaces and proper maps between them.

A ``SpaceModel`` is a truncated graded ring together with the extra data
needed for intersection-theoretic bookkeeping: monomial rewrite rules (one
per fibered generator), an optional dimension, an optional tangent bundle,
and an optional integration rule (coefficient of the top monomial).

Supported constructions:

* ``projective_space(n)`` -- Q[h]/(h^{n+1}), integral of h^n is 1, tangent
  class (n+1)[O(1)] - [O].
* ``projective_bundle(base, F)`` -- adds a weight-1 generator xi with the
  rewrite  xi^r = c_1 xi^{r-1} - c_2 xi^{r-2} + ... + (-1)^{r-1} c_r  (the
  sign convention under which, for rank-2 F, the centered class
  A = xi - c_1/2 satisfies A^2 = (1/4) c_1^2 - c_2 pulled back from the
  base).  Push-forward is the Segre rule p_*(xi^k) = s_{k-r+1} where
  sum_j s_j t^j = 1 / sum_i (-1)^i c_i t^i, so that p_*(xi^{r-1}) = 1.
* ``universal_rank2_base(truncation)`` -- the free ring Q[c1, c2] carrying a
  tautological rank-2 bundle; it has no dimension and cannot be integrated.

Maps compose; push-forward and pull-back of composites are the evident
compositions, and the relative tangent of a composite is
T_f (+) f^* T_g.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .char_classes import (
    FormalBundle,
    bundle_difference,
    bundle_dual,
    bundle_sum,
    twist_by_line,
)
from .exact_algebra import (
    Exponent,
    GeneratorSet,
    GradedElement,
    IncompatibleRingError,
)


class IntegrationError(ValueError):
    """Raised when integrating over a space with no fundamental class."""


class SpaceModel:
    """A truncated ring model of a space, with rewrite and integral rules."""

    def __init__(
        self,
        name: str,
        generators: GeneratorSet,
        truncation: int,
        relations: Dict[int, Tuple[int, GradedElement]] | None = None,
        dimension: Optional[int] = None,
        tangent: Optional[FormalBundle] = None,
        top_monomial: Optional[Exponent] = None,
    ):
        self.name = name
        self.generators = generators
        self.truncation = truncation
        self.relations = dict(relations or {})
        self.dimension = dimension
        self.tangent = tangent
        self.top_monomial = top_monomial

    def __repr__(self) -> str:
        return f"SpaceModel({self.name!r})"

    # -- element construction ------------------------------------------------

    def zero(self) -> GradedElement:
        return GradedElement.zero(self.generators, self.truncation)

    def constant(self, value) -> GradedElement:
        return GradedElement.constant(self.generators, self.truncation, value)

    def one(self) -> GradedElement:
        return self.constant(1)

    def generator(self, name: str) -> GradedElement:
        return GradedElement.generator(self.generators, self.truncation, name)

    def element(self, terms) -> GradedElement:
        return GradedElement(self.generators, self.truncation, terms)

    def line_bundle(self, c1: GradedElement) -> FormalBundle:
        return FormalBundle.line(self.reduce(c1))

    def trivial_bundle(self, rank: int = 1) -> FormalBundle:
        return FormalBundle(rank, self.one())

    # -- ring operations with rewriting ---------------------------------------

    def owns(self, a: GradedElement) -> bool:
        return (
            a.generators == self.generators and a.truncation == self.truncation
        )

    def _require(self, a: GradedElement) -> None:
        if not self.owns(a):
            raise IncompatibleRingError(
                f"element does not belong to the ring of {self.name}"
            )

    def reduce(self, a: GradedElement) -> GradedElement:
        """Rewrite all generator powers above their relation bound."""
        self._require(a)
        if not self.relations:
            return a
        gens = self.generators
        cap = self.truncation
        out: Dict[Exponent, Fraction] = {}
        work = list(a.terms.items())
        while work:
            e, c = work.pop()
            for idx, (power, repl) in self.relations.items():
                if e[idx] >= power:
                    rest = list(e)
                    rest[idx] -= power
                    for re_, rc in repl.terms.items():
                        newe = tuple(x + y for x, y in zip(re_, rest))
                        if gens.weight_of(newe) <= cap:
                            work.append((newe, c * rc))
                    break
            else:
                acc = out.get(e, Fraction(0)) + c
                if acc == 0:
                    out.pop(e, None)
                else:
                    out[e] = acc
        result = GradedElement(gens, cap)
        result.terms = out
        return result

    def mul(self, a: GradedElement, b: GradedElement) -> GradedElement:
        return self.reduce(a * b)

    def pow(self, a: GradedElement, n: int) -> GradedElement:
        result = self.one()
        base = self.reduce(a)
        k = n
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def integrate(self, a: GradedElement) -> Fraction:
        """Coefficient of the fundamental top monomial of the reduced element."""
        if self.top_monomial is None:
            raise IntegrationError(
                f"{self.name} has no fundamental class to integrate against"
            )
        return self.reduce(a).coefficient(self.top_monomial)


class MapModel:
    """A proper map with pull-back, push-forward, and relative tangent data."""

    def __init__(
        self,
        name: str,
        source: SpaceModel,
        target: SpaceModel,
        pullback_fn: Callable[[GradedElement], GradedElement],
        pushforward_fn: Callable[[GradedElement], GradedElement],
        relative_dimension: int,
        relative_tangent: FormalBundle,
    ):
        self.name = name
        self.source = source
        self.target = target
        self._pullback = pullback_fn
        self._pushforward = pushforward_fn
        self.relative_dimension = relative_dimension
        self.relative_tangent = relative_tangent

    def __repr__(self) -> str:
        return f"MapModel({self.name!r}: {self.source.name} -> {self.target.name})"

    def pullback(self, a: GradedElement) -> GradedElement:
        self.target._require(a)
        return self._pullback(a)

    def pushforward(self, a: GradedElement) -> GradedElement:
        self.source._require(a)
        return self._pushforward(a)

    def pullback_bundle(self, F: FormalBundle) -> FormalBundle:
        return FormalBundle(F.rank, self.pullback(F.chern))


def pullback(p: MapModel, a: GradedElement) -> GradedElement:
    return p.pullback(a)


def pushforward(p: MapModel, a: GradedElement) -> GradedElement:
    return p.pushforward(a)


def integrate(space: SpaceModel, a: GradedElement) -> Fraction:
    return space.integrate(a)


def compose_maps(outer: MapModel, inner: MapModel) -> MapModel:
    """The composite map outer o inner (inner first)."""
    if inner.target is not outer.source:
        raise IncompatibleRingError(
            f"cannot compose {outer.name} after {inner.name}: "
            f"{inner.target.name} != {outer.source.name}"
        )
    rel_tan = bundle_sum(
        inner.relative_tangent, inner.pullback_bundle(outer.relative_tangent)
    )
    return MapModel(
        name=f"{outer.name}*{inner.name}",
        source=inner.source,
        target=outer.target,
        pullback_fn=lambda a: inner.pullback(outer.pullback(a)),
        pushforward_fn=lambda a: outer.pushforward(inner.pushforward(a)),
        relative_dimension=inner.relative_dimension + outer.relative_dimension,
        relative_tangent=rel_tan,
    )


# ---------------------------------------------------------------------------
# Space constructors
# ---------------------------------------------------------------------------


def projective_space(n: int) -> SpaceModel:
    """P^n with ring Q[h]/(h^{n+1}); the relation is absorbed by truncation."""
    if n < 0:
        raise ValueError(f"projective space dimension must be >= 0, got {n}")
    gens = GeneratorSet(("h",), (1,)) if n >= 1 else GeneratorSet((), ())
    space = SpaceModel(
        name=f"P{n}",
        generators=gens,
        truncation=n,
        relations={},
        dimension=n,
        tangent=None,
        top_monomial=(n,) if n >= 1 else (),
    )
    # Euler rule: [T] = (n+1)[O(1)] - [O], i.e. rank n with c = (1+h)^{n+1}.
    if n >= 1:
        one_plus_h = space.one() + space.generator("h")
        space.tangent = FormalBundle(n, space.pow(one_plus_h, n + 1))
    else:
        space.tangent = FormalBundle(0, space.one())
    return space


def universal_rank2_base(truncation: int) -> SpaceModel:
    """Free ring Q[c1, c2] with a tautological rank-2 bundle, no integral."""
    gens = GeneratorSet(("c1", "c2"), (1, 2))
    space = SpaceModel(
        name=f"universal2({truncation})",
        generators=gens,
        truncation=truncation,
        relations={},
        dimension=None,
        tangent=None,
        top_monomial=None,
    )
    space.tautological = FormalBundle(  # type: ignore[attr-defined]
        2, space.one() + space.generator("c1") + space.generator("c2")
    )
    return space


def _extend(a: GradedElement, gens: GeneratorSet, truncation: int) -> GradedElement:
    """Re-express an element in a ring with extra trailing generators."""
    extra = len(gens) - len(a.generators)
    out = GradedElement(gens, truncation)
    out.terms = {e + (0,) * extra: c for e, c in a.terms.items()}
    return out


def segre_classes(F: FormalBundle, max_weight: int) -> List[GradedElement]:
    """[s_0, ..., s_max] with sum_j s_j t^j = 1 / sum_i (-1)^i c_i t^i.

    This is the inverse of the reflected Chern series, the normalization
    under which p_*(xi^{r-1+j}) = s_j holds for the xi convention above.
    """
    cs = [F.chern.grade_part(i) for i in range(0, max_weight + 1)]
    gens = F.chern.generators
    cap = F.chern.truncation
    out = [GradedElement.constant(gens, cap, 1)]
    for j in range(1, max_weight + 1):
        acc = GradedElement.zero(gens, cap)
        for i in range(1, j + 1):
            if i >= len(cs):
                break
            term = cs[i] * out[j - i]
            acc = acc + term.scale(Fraction((-1) ** (i - 1)))
        out.append(acc)
    return out


_FIBER_NAMES = ("xi", "eta", "zeta", "xi4", "xi5")


def projective_bundle(
    base: SpaceModel, F: FormalBundle, fiber_name: str | None = None
) -> Tuple[SpaceModel, MapModel]:
    """The bundle of lines in F over base, with its projection map."""
    base._require(F.chern)
    r = F.rank
    if r < 1:
        raise ValueError(f"projective bundle needs rank >= 1, got rank {r}")
    if fiber_name is None:
        for candidate in _FIBER_NAMES:
            if candidate not in base.generators.names:
                fiber_name = candidate
                break
        else:
            raise ValueError("ran out of fiber generator names; pass one explicitly")
    if fiber_name in base.generators.names:
        raise ValueError(f"generator name {fiber_name!r} already in use")

    gens = GeneratorSet(
        base.generators.names + (fiber_name,), base.generators.weights + (1,)
    )
    truncation = base.truncation + (r - 1)
    xi_index = len(gens) - 1

    relations = {
        idx: (power, _extend(repl, gens, truncation))
        for idx, (power, repl) in base.relations.items()
    }
    # xi^r = c_1 xi^{r-1} - c_2 xi^{r-2} + ... + (-1)^{r-1} c_r
    repl = GradedElement.zero(gens, truncation)
    for i in range(1, r + 1):
        ci = _extend(F.chern.grade_part(i), gens, truncation)
        mono = GradedElement(
            gens, truncation, {(0,) * xi_index + (r - i,): Fraction((-1) ** (i - 1))}
        )
        repl = repl + ci * mono
    relations[xi_index] = (r, repl)

    space = SpaceModel(
        name=f"P({F.rank}/{base.name})",
        generators=gens,
        truncation=truncation,
        relations=relations,
        dimension=None if base.dimension is None else base.dimension + (r - 1),
        tangent=None,
        top_monomial=(
            None
            if base.top_monomial is None
            else base.top_monomial + (r - 1,)
        ),
    )

    segre = segre_classes(F, base.truncation)

    def pull(a: GradedElement) -> GradedElement:
        return space.reduce(_extend(a, gens, truncation))

    def push(a: GradedElement) -> GradedElement:
        a = space.reduce(a)
        out = GradedElement.zero(base.generators, base.truncation)
        for e, c in a.terms.items():
            k = e[xi_index]
            j = k - (r - 1)
            if j < 0:
                continue
            base_expo = e[:xi_index]
            if base.generators.weight_of(base_expo) > base.truncation:
                continue
            mono = GradedElement(base.generators, base.truncation, {base_expo: c})
            out = out + mono * segre[j]
        return base.reduce(out)

    xi = space.generator(fiber_name)
    # Euler sequence: 0 -> O -> p^* F^v (x) O(1) -> T_p -> 0.
    pulled_dual = FormalBundle(r, pull(bundle_dual(F).chern))
    t_rel = bundle_difference(
        twist_by_line(pulled_dual, xi), space.trivial_bundle(1)
    )

    pmap = MapModel(
        name=f"p[{fiber_name}]",
        source=space,
        target=base,
        pullback_fn=pull,
        pushforward_fn=push,
        relative_dimension=r - 1,
        relative_tangent=t_rel,
    )
    pmap.fiber_name = fiber_name  # type: ignore[attr-defined]
    pmap.bundle = F  # type: ignore[attr-defined]
    if base.tangent is not None:
        space.tangent = bundle_sum(t_rel, pmap.pullback_bundle(base.tangent))
    return space, pmap


def rank2_a_class(p: MapModel) -> GradedElement:
    """A = xi - (1/2) p^* c_1(F) for a rank-2 projective bundle map."""
    F = getattr(p, "bundle", None)
    fiber_name = getattr(p, "fiber_name", None)
    if F is None or fiber_name is None or F.rank != 2:
        raise ValueError("rank2_a_class needs a projective-bundle map of a rank-2 bundle")
    xi = p.source.generator(fiber_name)
    return xi - p.pullback(F.chern.grade_part(1)).scale(Fraction(1, 2))


def grassmannian_quotient_classes(
    maxk: int, base: SpaceModel | None = None
) -> List[GradedElement]:
    """[c_0(Q), ..., c_maxk(Q)] from the two-step recurrence.

    c_k(Q) = -c_1(S) c_{k-1}(Q) - c_2(S) c_{k-2}(Q), seeded by c_0 = 1 and
    c_1(Q) = -c_1(S), in the universal rank-2 base ring.
    """
    if base is None:
        base = universal_rank2_base(maxk)
    if maxk > base.truncation:
        raise ValueError(
            f"maxk {maxk} exceeds ring truncation {base.truncation}"
        )
    c1 = base.generator("c1")
    c2 = base.generator("c2")
    out = [base.one()]
    if maxk >= 1:
        out.append(-c1)
    for k in range(2, maxk + 1):
        out.append(-(c1 * out[k - 1]) - (c2 * out[k - 2]))
    return out
