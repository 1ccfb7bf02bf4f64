"""Evaluator for the command-line expression language.

Two dialects share one grammar:

* the symbolic dialect, where values are exact rationals, graded ring
  elements, bundles, maps, spaces, and coefficient lists, and division is
  restricted to forming rational constants; and
* the metric dialect, where the free variable ``z`` ranges over a complex
  grid and the primitives are ``conj``, ``abs2``, ``exp``, ``log``.

Space-producing calls (``P(n)``, ``universal2(D)``, ``proj_bundle``,
``point``) install a naming context: generator names, the tangent bundle
``T``, and for projective bundles the projection ``p``, the fiber class
``xi``, the relative tangent ``T_rel``, and (rank 2 only) the centered
class ``A``.  ``integrate(space, body)`` and ``proj_bundle(base, bundle)``
evaluate their second argument inside the first argument's context.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..char_classes import (
    CharSeries,
    FormalBundle,
    apply_class,
    bundle_dual,
    bundle_sum,
    chern_character,
    todd_class,
    twist_by_line,
)
from ..exact_algebra import (
    GradedElement,
    UnivariateSeries,
    render_graded,
    render_rational,
    render_series,
)
from ..spaces import (
    IntegrationError,
    MapModel,
    SpaceModel,
    projective_bundle,
    projective_space,
    rank2_a_class,
    universal_rank2_base,
)
from .expr import BinOp, Call, ListLit, Name, Neg, Node, Num, parse_expr, render


class EvalError(ValueError):
    """A semantic error, citing the offending subexpression and position."""

    def __init__(self, message: str, node: Node):
        line = getattr(node, "line", 0)
        col = getattr(node, "col", 0)
        super().__init__(
            f"error at line {line}, column {col} in {render(node)!r}: {message}"
        )
        self.line = line
        self.col = col


@dataclass
class SpaceContext:
    """A space with its bound names and the class behind O(k)."""

    space: SpaceModel
    bindings: Dict[str, object]
    hyperplane: Optional[GradedElement]
    projection: Optional[MapModel] = None


def _context_for(space: SpaceModel, projection: Optional[MapModel] = None) -> SpaceContext:
    bindings: Dict[str, object] = {}
    for name in space.generators.names:
        bindings[name] = space.generator(name)
    if space.tangent is not None:
        bindings["T"] = space.tangent
    hyperplane: Optional[GradedElement] = None
    if projection is not None:
        fiber = getattr(projection, "fiber_name", None)
        if fiber is not None:
            hyperplane = space.generator(fiber)
            bindings["xi"] = hyperplane
        bindings["p"] = projection
        bindings["T_rel"] = projection.relative_tangent
        F = getattr(projection, "bundle", None)
        if F is not None and F.rank == 2:
            bindings["A"] = rank2_a_class(projection)
    elif "h" in space.generators.names:
        hyperplane = space.generator("h")
    return SpaceContext(space, bindings, hyperplane, projection)


class Evaluator:
    """Evaluates parsed expressions against a stack of space contexts."""

    def __init__(self) -> None:
        self.stack: List[SpaceContext] = []

    # -- context plumbing ---------------------------------------------------

    def push_space(self, ctx: SpaceContext) -> None:
        self.stack.append(ctx)

    def pop_space(self) -> None:
        self.stack.pop()

    def _lookup(self, name: str) -> Optional[object]:
        for ctx in reversed(self.stack):
            if name in ctx.bindings:
                return ctx.bindings[name]
        return None

    def _owning_space(self, *elements: GradedElement) -> Optional[SpaceModel]:
        for ctx in reversed(self.stack):
            if all(ctx.space.owns(e) for e in elements):
                return ctx.space
        return None

    def _current(self, node: Node) -> SpaceContext:
        if not self.stack:
            raise EvalError(
                "no ambient space; wrap in integrate(space, ...) or pass --space",
                node,
            )
        return self.stack[-1]

    # -- entry points --------------------------------------------------------

    def evaluate_source(self, text: str) -> object:
        return self.evaluate(parse_expr(text))

    def evaluate(self, node: Node) -> object:
        if isinstance(node, Num):
            return Fraction(node.value)
        if isinstance(node, Name):
            bound = self._lookup(node.ident)
            if bound is None:
                raise EvalError(f"unknown name {node.ident!r}", node)
            return bound
        if isinstance(node, ListLit):
            return [self.evaluate(item) for item in node.items]
        if isinstance(node, Neg):
            return self._negate(self.evaluate(node.operand), node)
        if isinstance(node, BinOp):
            return self._binop(node)
        if isinstance(node, Call):
            return self._call(node)
        raise EvalError("unsupported expression", node)

    # -- helpers -------------------------------------------------------------

    def _rational(self, value: object, node: Node) -> Fraction:
        if isinstance(value, Fraction):
            return value
        raise EvalError("expected a rational number", node)

    def _negate(self, value: object, node: Node) -> object:
        if isinstance(value, Fraction):
            return -value
        if isinstance(value, GradedElement):
            return value.scale(-1)
        if isinstance(value, UnivariateSeries):
            return value.scale(-1)
        raise EvalError("cannot negate this value", node)

    def _space_mul(self, a: GradedElement, b: GradedElement) -> GradedElement:
        space = self._owning_space(a, b)
        if space is not None:
            return space.mul(a, b)
        return a * b

    def _as_element(self, value: object, other: GradedElement) -> Optional[GradedElement]:
        if isinstance(value, GradedElement):
            return value
        if isinstance(value, Fraction):
            return GradedElement.constant(other.generators, other.truncation, value)
        return None

    def _binop(self, node: BinOp) -> object:
        left = self.evaluate(node.left)
        right = self.evaluate(node.right)
        op = node.op
        if op == "/":
            if isinstance(left, Fraction) and isinstance(right, Fraction):
                if right == 0:
                    raise EvalError("division by zero", node)
                return left / right
            if isinstance(left, GradedElement) and isinstance(right, Fraction):
                if right == 0:
                    raise EvalError("division by zero", node)
                return left.scale(Fraction(1) / right)
            raise EvalError(
                "division is restricted to rational constants "
                "(and scaling a class by one)",
                node,
            )
        if op == "^":
            return self._power(left, right, node)
        if op == "*":
            if isinstance(left, Fraction) and isinstance(right, Fraction):
                return left * right
            if isinstance(left, Fraction) and isinstance(right, (GradedElement, UnivariateSeries)):
                return right.scale(left)
            if isinstance(right, Fraction) and isinstance(left, (GradedElement, UnivariateSeries)):
                return left.scale(right)
            if isinstance(left, GradedElement) and isinstance(right, GradedElement):
                return self._space_mul(left, right)
            raise EvalError("cannot multiply these values", node)
        if op in ("+", "-"):
            if isinstance(left, Fraction) and isinstance(right, Fraction):
                return left + right if op == "+" else left - right
            if isinstance(left, FormalBundle) and isinstance(right, FormalBundle):
                if op == "+":
                    return bundle_sum(left, right)
                raise EvalError("bundle subtraction is not defined here; use classes", node)
            if isinstance(left, GradedElement):
                rhs = self._as_element(right, left)
                if rhs is not None:
                    return left + rhs if op == "+" else left - rhs
            if isinstance(right, GradedElement):
                lhs = self._as_element(left, right)
                if lhs is not None:
                    return lhs + right if op == "+" else lhs - right
            raise EvalError(f"cannot apply {op!r} to these values", node)
        raise EvalError(f"unknown operator {op!r}", node)

    def _power(self, base: object, exponent: object, node: BinOp) -> object:
        if not isinstance(exponent, Fraction) or exponent.denominator != 1:
            raise EvalError("exponent must be an integer", node)
        k = int(exponent)
        if isinstance(base, Fraction):
            if k < 0 and base == 0:
                raise EvalError("zero to a negative power", node)
            return base ** k
        if isinstance(base, GradedElement):
            if k < 0:
                raise EvalError("negative powers of classes are not defined", node)
            space = self._owning_space(base)
            if space is not None:
                return space.pow(base, k)
            out = GradedElement.constant(base.generators, base.truncation, 1)
            for _ in range(k):
                out = out * base
            return out
        raise EvalError("cannot exponentiate this value", node)

    # -- call dispatch ---------------------------------------------------------

    def _call(self, node: Call) -> object:
        func = node.func
        if func == "integrate":
            return self._eval_integrate(node)
        if func == "proj_bundle":
            return self._eval_proj_bundle(node)
        if func in ("P", "point", "universal2"):
            return self._eval_space_ctor(node)

        args = [self.evaluate(a) for a in node.args]

        if func == "O":
            return self._eval_line(node, args)
        if func == "bundle":
            return self._eval_bundle(node, args)
        if func == "ch":
            bundle = self._bundle_arg(node, args, 0, exact=1)
            return chern_character(bundle)
        if func == "td":
            bundle = self._bundle_arg(node, args, 0, exact=1)
            return todd_class(bundle)
        if func == "additive":
            if len(args) != 2 or not isinstance(args[0], list):
                raise EvalError("additive takes a series literal and a bundle", node)
            if not all(isinstance(q, Fraction) for q in args[0]):
                raise EvalError("series coefficients must be rational numbers", node)
            bundle = self._bundle_arg(node, args, 1)
            series = UnivariateSeries(args[0], max(len(args[0]) - 1, 0))
            if series.coefficient(0) != 0:
                raise EvalError("additive series must have zero constant term", node)
            return apply_class(CharSeries.additive(series), bundle)
        if func == "c":
            if len(args) != 2:
                raise EvalError("c takes an index and a bundle: c(i, E)", node)
            index = args[0]
            if not isinstance(index, Fraction) or index.denominator != 1 or index < 0:
                raise EvalError("the index of c must be a nonnegative integer", node)
            bundle = self._bundle_arg(node, args, 1)
            return bundle.chern_class(int(index))
        if func == "dual":
            return bundle_dual(self._bundle_arg(node, args, 0, exact=1))
        if func == "sum":
            if len(args) != 2:
                raise EvalError("sum takes two bundles", node)
            return bundle_sum(
                self._bundle_arg(node, args, 0), self._bundle_arg(node, args, 1)
            )
        if func == "twist":
            if len(args) != 2:
                raise EvalError("twist takes a bundle and a line class", node)
            bundle = self._bundle_arg(node, args, 0)
            ell = args[1]
            if isinstance(ell, FormalBundle):
                if ell.rank != 1:
                    raise EvalError("twisting requires a line bundle", node)
                ell = ell.chern.grade_part(1)
            if not isinstance(ell, GradedElement):
                raise EvalError("twisting requires a line bundle or a weight-1 class", node)
            return twist_by_line(bundle, ell)
        if func == "pullback":
            return self._eval_map_transport(node, args, pull=True)
        if func == "pushforward":
            return self._eval_map_transport(node, args, pull=False)
        raise EvalError(f"unknown function {func!r}", node)

    def _bundle_arg(
        self, node: Call, args: List[object], i: int, exact: Optional[int] = None
    ) -> FormalBundle:
        if exact is not None and len(args) != exact:
            raise EvalError(f"{node.func} takes {exact} argument(s)", node)
        if i >= len(args) or not isinstance(args[i], FormalBundle):
            raise EvalError(f"{node.func} expects a bundle argument", node)
        return args[i]

    def _eval_space_ctor(self, node: Call) -> SpaceContext:
        if node.func == "point":
            if node.args:
                raise EvalError("point takes no arguments", node)
            return _context_for(projective_space(0))
        if len(node.args) != 1:
            raise EvalError(f"{node.func} takes one integer argument", node)
        value = self.evaluate(node.args[0])
        if not isinstance(value, Fraction) or value.denominator != 1 or value < 0:
            raise EvalError(f"{node.func} needs a nonnegative integer", node)
        n = int(value)
        if node.func == "P":
            return _context_for(projective_space(n))
        if n < 1:
            raise EvalError("universal2 needs a positive truncation order", node)
        return _context_for(universal_rank2_base(n))

    def _eval_proj_bundle(self, node: Call) -> SpaceContext:
        if len(node.args) != 2:
            raise EvalError("proj_bundle takes a base space and a bundle", node)
        base_ctx = self.evaluate(node.args[0])
        if not isinstance(base_ctx, SpaceContext):
            raise EvalError("the first argument of proj_bundle must be a space", node)
        self.push_space(base_ctx)
        try:
            F = self.evaluate(node.args[1])
        finally:
            self.pop_space()
        if not isinstance(F, FormalBundle):
            raise EvalError("the second argument of proj_bundle must be a bundle", node)
        space, pmap = projective_bundle(base_ctx.space, F)
        ctx = _context_for(space, pmap)
        # names from the base remain visible upstairs via its generators
        return ctx

    def _eval_integrate(self, node: Call) -> Fraction:
        if len(node.args) != 2:
            raise EvalError("integrate takes a space and a class", node)
        ctx = self.evaluate(node.args[0])
        if not isinstance(ctx, SpaceContext):
            raise EvalError("the first argument of integrate must be a space", node)
        self.push_space(ctx)
        try:
            value = self.evaluate(node.args[1])
        finally:
            self.pop_space()
        if isinstance(value, Fraction):
            value = ctx.space.constant(value)
        if not isinstance(value, GradedElement):
            raise EvalError("integrate needs a class to integrate", node)
        try:
            return ctx.space.integrate(value)
        except IntegrationError as exc:
            raise EvalError(str(exc), node) from exc

    def _eval_line(self, node: Call, args: List[object]) -> FormalBundle:
        ctx = self._current(node)
        if not args:
            return ctx.space.trivial_bundle(1)
        if len(args) != 1:
            raise EvalError("O takes at most one integer twist", node)
        k = args[0]
        if not isinstance(k, Fraction) or k.denominator != 1:
            raise EvalError("the twist of O must be an integer", node)
        k = int(k)
        if k == 0:
            return ctx.space.trivial_bundle(1)
        if ctx.hyperplane is None:
            raise EvalError(
                f"O({k}) needs a hyperplane class; space {ctx.space.name} has none",
                node,
            )
        return ctx.space.line_bundle(ctx.hyperplane.scale(k))

    def _eval_bundle(self, node: Call, args: List[object]) -> FormalBundle:
        ctx = self._current(node)
        if len(args) != 2:
            raise EvalError("bundle takes a rank and a list of Chern classes", node)
        rank = args[0]
        if not isinstance(rank, Fraction) or rank.denominator != 1 or rank < 0:
            raise EvalError("the rank must be a nonnegative integer", node)
        rank = int(rank)
        classes_node = node.args[1]
        if not isinstance(classes_node, ListLit):
            raise EvalError("the Chern classes must be given as a list", node)
        if len(classes_node.items) > rank:
            raise EvalError(f"a rank-{rank} bundle has at most {rank} Chern classes", node)
        total = ctx.space.one()
        for i, item in enumerate(classes_node.items, start=1):
            value = self.evaluate(item)
            if isinstance(value, Fraction):
                if value != 0:
                    raise EvalError(
                        f"c_{i} has weight {i}; a nonzero rational cannot be c_{i}",
                        item,
                    )
                continue
            if not isinstance(value, GradedElement):
                raise EvalError(f"c_{i} must be a graded class", item)
            reduced = ctx.space.reduce(value)
            for k in range(reduced.truncation + 1):
                if k != i and reduced.grade_part(k).terms:
                    raise EvalError(
                        f"c_{i} must be purely of weight {i}", item
                    )
            total = total + reduced
        return FormalBundle(rank, total)

    def _eval_map_transport(self, node: Call, args: List[object], pull: bool) -> object:
        if len(args) != 2:
            raise EvalError(
                f"{node.func} takes a map and a class or bundle", node
            )
        pmap = args[0]
        if not isinstance(pmap, MapModel):
            raise EvalError(f"the first argument of {node.func} must be a map", node)
        value = args[1]
        if isinstance(value, FormalBundle):
            if not pull:
                raise EvalError("pushforward acts on classes, not bundles", node)
            return pmap.pullback_bundle(value)
        if isinstance(value, Fraction):
            ring = pmap.target if pull else pmap.source
            value = ring.constant(value)
        if not isinstance(value, GradedElement):
            raise EvalError(f"{node.func} needs a class argument", node)
        return pmap.pullback(value) if pull else pmap.pushforward(value)


def format_value(value: object) -> str:
    """Render an evaluation result in the exact output syntax."""
    if isinstance(value, Fraction):
        return render_rational(value)
    if isinstance(value, GradedElement):
        return render_graded(value)
    if isinstance(value, FormalBundle):
        return f"bundle(rank={value.rank}, c={render_graded(value.chern)})"
    if isinstance(value, UnivariateSeries):
        return render_series(value)
    if isinstance(value, SpaceContext):
        return value.space.name
    if isinstance(value, MapModel):
        return repr(value)
    if isinstance(value, list):
        return "[" + ", ".join(format_value(q) for q in value) + "]"
    return repr(value)


def evaluate_expression(text: str, space_text: Optional[str] = None) -> object:
    """One-shot evaluation with an optional ambient space expression."""
    ev = Evaluator()
    if space_text:
        ctx = ev.evaluate_source(space_text)
        if not isinstance(ctx, SpaceContext):
            raise EvalError(
                "--space must evaluate to a space", parse_expr(space_text)
            )
        ev.push_space(ctx)
    return ev.evaluate_source(text)


# ---------------------------------------------------------------------------
# Metric dialect
# ---------------------------------------------------------------------------

_METRIC_FUNCS = {
    "conj": np.conj,
    "abs2": lambda z: (z * np.conj(z)).real,
    "exp": np.exp,
    "log": np.log,
}


def evaluate_metric(node: Node, z: np.ndarray) -> np.ndarray:
    """Evaluate a metric-weight expression over a complex grid.

    Supported: the variable z, conj(z), abs2(z), exp, log, rational
    constants, and the arithmetic operators with integer powers.
    """
    if isinstance(node, Num):
        return np.full(z.shape, float(node.value))
    if isinstance(node, Name):
        if node.ident == "z":
            return z
        raise EvalError(f"unknown metric variable {node.ident!r}", node)
    if isinstance(node, Neg):
        return -evaluate_metric(node.operand, z)
    if isinstance(node, Call):
        fn = _METRIC_FUNCS.get(node.func)
        if fn is None or len(node.args) != 1:
            raise EvalError(
                f"unknown metric function {node.func!r} (use conj, abs2, exp, log)",
                node,
            )
        return fn(evaluate_metric(node.args[0], z))
    if isinstance(node, BinOp):
        if node.op == "^":
            base = evaluate_metric(node.left, z)
            if not isinstance(node.right, Num):
                if (
                    isinstance(node.right, Neg)
                    and isinstance(node.right.operand, Num)
                ):
                    return base ** (-node.right.operand.value)
                raise EvalError("metric powers must be integer literals", node)
            return base ** node.right.value
        a = evaluate_metric(node.left, z)
        b = evaluate_metric(node.right, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        raise EvalError(f"unknown operator {node.op!r}", node)
    raise EvalError("unsupported metric expression", node)


def metric_weight_fn(text: str):
    """Compile a metric expression to a real-valued grid function."""
    node = parse_expr(text)

    def weight(z: np.ndarray) -> np.ndarray:
        value = evaluate_metric(node, np.asarray(z, dtype=complex))
        return np.asarray(value).real

    return weight
