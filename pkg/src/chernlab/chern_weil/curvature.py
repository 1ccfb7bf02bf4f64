"""Chern connection curvature and characteristic forms on grids.

For a metric H sampled in a holomorphic frame, the Chern connection form is
W = H^(-1) dH/dz and the curvature density is

    K = -d/dzbar ( H^(-1) dH/dz ),

the matrix Q in Theta = Q dz wedge dzbar.  With this sign the first Chern
density tr(K)/pi of the Fubini-Study metric on O(1) is (1/pi)(1+|z|^2)^(-2),
which integrates to +1 over P1; that anchor pins every convention here.

Characteristic forms are evaluated through power sums: any series in Chern
classes is, in low grades, a combination lambda0 + lambda1 p1 + lambda2 p2 +
lambda11 p1^2 of traces of curvature powers.  The coefficients are extracted
exactly from the symbolic side of this package on a rank-2 split ring, so
the numeric lab and the exact calculus can never drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from ..char_classes import CharSeries, FormalBundle, apply_class
from ..exact_algebra import GeneratorSet, GradedElement
from . import fd
from .forms import NumericForm, resample
from .grids import CHARTS, ChartGrid
from .metrics import InvalidMetricError, MetricSample


@dataclass
class ConnectionCurvature:
    """Connection form and curvature density per chart, matrix valued."""

    grid: ChartGrid
    rank: int
    omega: Dict[str, np.ndarray]
    curvature: Dict[str, np.ndarray]


def connection_curvature(m: MetricSample, order: int = 6) -> ConnectionCurvature:
    """Curvature of the Chern connection of a sampled metric."""
    grid = m.grid
    s = grid.spacing
    omega: Dict[str, np.ndarray] = {}
    curv: Dict[str, np.ndarray] = {}
    for chart in CHARTS:
        H = m.h[chart]
        if m.rank == 0:
            omega[chart] = H.copy()
            curv[chart] = H.copy()
            continue
        Hz = fd.d_z(H, s, order)
        Hinv = np.linalg.inv(H)
        W = Hinv @ Hz
        K = -fd.d_zbar(W, s, order)
        omega[chart] = W
        curv[chart] = K
    return ConnectionCurvature(grid, m.rank, omega, curv)


def chart_conjugation_residual(
    cc: ConnectionCurvature,
    m: MetricSample,
    radii: Tuple[float, ...] = (0.8, 1.0, 1.25),
    samples: int = 96,
) -> float:
    """Max violation of the curvature gluing law on overlap circles.

    The two chart representations must be conjugate by the transition and
    rescaled by the Jacobian: K_z(z) = g(z)^(-1) K_w(1/z) g(z) |z|^(-4).
    Resampling is bilinear, so the residual of consistent data is
    O(spacing^2).
    """
    if m.transition is None:
        raise InvalidMetricError("sample carries no transition matrix")
    if cc.rank == 0:
        return 0.0
    worst = 0.0
    theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    for r0 in radii:
        z = r0 * np.exp(1j * theta)
        Kz = resample(cc.curvature["z"], cc.grid, z)
        Kw = resample(cc.curvature["w"], cc.grid, 1.0 / z)
        g = m.transition(z)
        ginv = np.linalg.inv(g)
        jac = (np.abs(z) ** (-4.0))[:, None, None]
        worst = max(worst, float(np.max(np.abs(Kz - ginv @ Kw @ g * jac))))
    return worst


@dataclass(frozen=True)
class PowerSumTemplate:
    """Low-grade expansion of a characteristic series in trace powers."""

    lambda0_per_rank: Fraction
    lambda0_const: Fraction
    lambda1: Fraction
    lambda2: Fraction
    lambda11: Fraction

    def grade0(self, rank: int) -> Fraction:
        return self.lambda0_per_rank * rank + self.lambda0_const


def power_sum_template(phi: CharSeries) -> PowerSumTemplate:
    """Extract lambda coefficients from the exact calculus.

    Evaluates phi on a split rank-2 bundle with Chern roots x, y and solves
    the 2x2 triangular system relating monomial coefficients to the power
    sums p2 = x^2 + y^2 and p1^2 = x^2 + 2xy + y^2.
    """
    gens = GeneratorSet(("x", "y"), (1, 1))
    truncation = 2
    x = GradedElement.generator(gens, truncation, "x")
    y = GradedElement.generator(gens, truncation, "y")
    chern = GradedElement.constant(gens, truncation, 1) + (x + y) + (x * y)
    value = apply_class(phi, FormalBundle(2, chern))

    e_x = value.coefficient((1, 0))
    e_x2 = value.coefficient((2, 0))
    e_xy = value.coefficient((1, 1))
    lam11 = e_xy / 2
    lam2 = e_x2 - lam11
    const = value.constant_term()
    if phi.kind == "chern_character":
        per_rank, c0 = Fraction(1), Fraction(0)
    else:
        per_rank, c0 = Fraction(0), const
    return PowerSumTemplate(per_rank, c0, e_x, lam2, lam11)


@dataclass
class CharForm:
    """Characteristic form of a metric bundle, split by grade."""

    grade0: float
    grade1: NumericForm
    template: PowerSumTemplate
    rank: int


def char_form(
    cc: ConnectionCurvature,
    phi: CharSeries,
    template: Optional[PowerSumTemplate] = None,
) -> CharForm:
    """Evaluate a characteristic series on a curvature sample.

    On a one-dimensional base only grades 0 and 1 survive; the grade-1
    density is lambda1 tr(K)/pi per chart.
    """
    tmpl = template if template is not None else power_sum_template(phi)
    lam1 = float(tmpl.lambda1)
    data = {}
    for chart in CHARTS:
        K = cc.curvature[chart]
        if cc.rank == 0:
            data[chart] = np.zeros((cc.grid.n, cc.grid.n))
        else:
            tr = np.einsum("...ii->...", K)
            data[chart] = lam1 * tr.real / np.pi
    grade1 = NumericForm(cc.grid, (1, 1), data, name=f"{phi.kind} grade 1")
    grade0 = float(tmpl.grade0(cc.rank))
    return CharForm(grade0, grade1, tmpl, cc.rank)


def first_chern_line(
    m: MetricSample,
    section: Optional[Dict[str, np.ndarray]] = None,
    order: int = 6,
) -> NumericForm:
    """c1(L, h) as dd^c(-log ||s||^2) for a nonvanishing section s.

    By default s is the chart frame section, so ||s||^2 is the metric weight
    itself.  This route uses a single second-derivative stencil and serves
    as the independent path against the curvature-trace computation.
    """
    if m.rank != 1:
        raise InvalidMetricError(f"first_chern_line needs a line bundle, got rank {m.rank}")
    grid = m.grid
    data = {}
    for chart in CHARTS:
        weight = m.scalar(chart)
        if section is not None:
            sec = np.asarray(section[chart])
            norm2 = np.abs(sec) ** 2
            bad = norm2[grid.eval_mask(chart=chart)] < 1e-300
            if np.any(bad):
                raise InvalidMetricError(
                    "section vanishes inside the evaluation disk; "
                    "dd^c log ||s||^2 is singular there"
                )
            weight = weight * norm2
        if np.any(weight[grid.eval_mask(chart=chart)] <= 0.0):
            raise InvalidMetricError(f"metric weight not positive on chart {chart!r}")
        with np.errstate(divide="ignore", invalid="ignore"):
            logw = np.where(weight > 0.0, np.log(np.where(weight > 0.0, weight, 1.0)), 0.0)
        lap = fd.laplacian(logw, grid.spacing, order)
        data[chart] = -lap / (4.0 * np.pi)
    return NumericForm(grid, (1, 1), data, name=f"c1({m.name})")
