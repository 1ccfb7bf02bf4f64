"""Differential forms as per-chart density arrays, and their calculus.

A (1,1)-form is stored through its density against the euclidean area
element dA = dx dy = (i/2) dz wedge dzbar of each chart; a (0,0)-form is just a
function.  Under w = 1/z the (1,1) density transforms with the Jacobian
|dz/dw|^2 = |w|^(-4), and a function composes.  Integration over P1 uses a
smooth partition of unity subordinate to the two evaluation disks, so each
chart integrates a compactly supported smooth integrand and the quadrature
error of the plain node sum decays faster than any power of the spacing.

Node sums run in a fixed chart-major, row-major order, which keeps reports
byte-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from . import fd
from .grids import CHARTS, ChartGrid


class ChartMismatchError(ValueError):
    """The two chart representations disagree beyond grid tolerance."""


@dataclass
class NumericForm:
    """A (0,0) or (1,1) form on P1 as a pair of chart densities."""

    grid: ChartGrid
    bidegree: Tuple[int, int]
    data: Dict[str, np.ndarray]
    name: str = ""

    def __post_init__(self) -> None:
        if self.bidegree not in ((0, 0), (1, 1)):
            raise ValueError(f"unsupported bidegree {self.bidegree}")
        n = self.grid.n
        for chart in CHARTS:
            if chart not in self.data:
                raise ValueError(f"missing chart {chart!r}")
            arr = np.asarray(self.data[chart])
            if arr.shape != (n, n):
                raise ValueError(f"chart {chart!r} has shape {arr.shape}, expected {(n, n)}")
            self.data[chart] = arr

    def __neg__(self) -> "NumericForm":
        return NumericForm(
            self.grid,
            self.bidegree,
            {c: -self.data[c] for c in CHARTS},
            name=f"-({self.name})" if self.name else "",
        )

    def __add__(self, other: "NumericForm") -> "NumericForm":
        self._align(other)
        return NumericForm(
            self.grid, self.bidegree, {c: self.data[c] + other.data[c] for c in CHARTS}
        )

    def __sub__(self, other: "NumericForm") -> "NumericForm":
        self._align(other)
        return NumericForm(
            self.grid, self.bidegree, {c: self.data[c] - other.data[c] for c in CHARTS}
        )

    def scale(self, factor: float) -> "NumericForm":
        return NumericForm(
            self.grid, self.bidegree, {c: factor * self.data[c] for c in CHARTS}
        )

    def _align(self, other: "NumericForm") -> None:
        if self.grid != other.grid:
            raise ValueError("forms live on different grids")
        if self.bidegree != other.bidegree:
            raise ValueError("forms have different bidegrees")

    def max_on_interior(self) -> float:
        """Max absolute value over the covering disks |z| <= 1 and |w| <= 1."""
        worst = 0.0
        for chart in CHARTS:
            mask = self.grid.interior_mask(chart)
            worst = max(worst, float(np.max(np.abs(self.data[chart][mask]))))
        return worst


def resample(arr: np.ndarray, grid: ChartGrid, points: np.ndarray) -> np.ndarray:
    """Bilinear interpolation of a chart array at arbitrary complex points.

    Works for trailing matrix dimensions as well; accuracy O(spacing^2),
    which bounds how sharp any cross-chart comparison can be.
    """
    pts = np.asarray(points, dtype=complex)
    x = (pts.real + grid.half_width) / grid.spacing
    y = (pts.imag + grid.half_width) / grid.spacing
    if np.any(x < 0) or np.any(y < 0) or np.any(x > grid.n - 1) or np.any(y > grid.n - 1):
        raise ValueError("resample point outside the chart square")
    i0 = np.clip(np.floor(x).astype(int), 0, grid.n - 2)
    j0 = np.clip(np.floor(y).astype(int), 0, grid.n - 2)
    fx = (x - i0).reshape(x.shape + (1,) * (arr.ndim - 2))
    fy = (y - j0).reshape(y.shape + (1,) * (arr.ndim - 2))
    a00 = arr[i0, j0]
    a10 = arr[i0 + 1, j0]
    a01 = arr[i0, j0 + 1]
    a11 = arr[i0 + 1, j0 + 1]
    return (
        a00 * (1 - fx) * (1 - fy)
        + a10 * fx * (1 - fy)
        + a01 * (1 - fx) * fy
        + a11 * fx * fy
    )


def _bump(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step_down(r: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """C-infinity profile: 1 for r <= lo, 0 for r >= hi."""
    x = (np.asarray(r, dtype=float) - lo) / (hi - lo)
    up = _bump(1.0 - x)
    down = _bump(x)
    with np.errstate(invalid="ignore"):
        val = np.where(up + down > 0.0, up / np.where(up + down > 0.0, up + down, 1.0), 0.0)
    return val


def poly_step_down(r: np.ndarray, lo: float, hi: float, smoothness: int = 9) -> np.ndarray:
    """C^smoothness polynomial profile: 1 for r <= lo, 0 for r >= hi.

    The generalized smoothstep of degree 2N+1; its first N derivatives
    vanish at both junctions, so node sums against it converge like
    spacing^(N+2) instead of the much slower Gevrey rate of exponential
    bump profiles.
    """
    from math import comb

    N = smoothness
    x = np.clip((np.asarray(r, dtype=float) - lo) / (hi - lo), 0.0, 1.0)
    acc = np.zeros_like(x)
    for k in range(N + 1):
        acc += comb(N + k, k) * comb(2 * N + 1, N - k) * (-x) ** k
    return 1.0 - acc * x ** (N + 1)


# Partition of unity subordinate to the chart evaluation disks: psi_z(pt) is
# a function of |z(pt)| only, equal to 1 inside radius 0.95 and 0 beyond 1.9,
# and psi_w = 1 - psi_z.  Both supports sit strictly inside the disks.
_PARTITION_LO = 0.95
_PARTITION_HI = 1.9


def partition_weight(radii: np.ndarray) -> np.ndarray:
    return poly_step_down(radii, _PARTITION_LO, _PARTITION_HI)


def overlap_residual(form: NumericForm, radii: Tuple[float, ...] = (0.8, 1.0, 1.25), samples: int = 96) -> float:
    """Max mismatch of the two chart densities on overlap circles.

    Densities are compared after the w = 1/z change of coordinates; points
    are bilinearly resampled on both charts, so the expected residual of a
    consistent form is O(spacing^2).
    """
    worst = 0.0
    theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    p, q = form.bidegree
    for r0 in radii:
        z = r0 * np.exp(1j * theta)
        fz = resample(form.data["z"], form.grid, z)
        fw = resample(form.data["w"], form.grid, 1.0 / z)
        if (p, q) == (1, 1):
            fw = fw / (np.abs(z) ** 4)
        worst = max(worst, float(np.max(np.abs(fz - fw))))
    return worst


def chart_tolerance(grid: ChartGrid, scale: float = 50.0) -> float:
    """Consistency tolerance tied to the grid spacing (bilinear resampling)."""
    return scale * grid.spacing**2


def integrate_p1(
    form: NumericForm,
    check_consistency: bool = True,
    consistency_scale: float = 50.0,
) -> float:
    """Integral over P1 of a (1,1)-form via the two-chart partition of unity."""
    if form.bidegree != (1, 1):
        raise ValueError("only (1,1) forms integrate over P1")
    if check_consistency:
        residual = overlap_residual(form)
        tol = chart_tolerance(form.grid, consistency_scale)
        if residual > tol:
            raise ChartMismatchError(
                f"chart densities disagree on the overlap: {residual:.3e} > {tol:.3e}"
            )
    grid = form.grid
    cell = grid.spacing**2
    total = 0.0
    for chart in CHARTS:
        r = grid.radii(chart)
        if chart == "z":
            weight = partition_weight(r)
        else:
            with np.errstate(divide="ignore"):
                r_inv = np.where(r > 1e-300, 1.0 / np.where(r > 1e-300, r, 1.0), np.inf)
            weight = 1.0 - partition_weight(r_inv)
        vals = np.real(form.data[chart]) * weight
        total += float(np.sum(vals)) * cell
    return total


def ddc(f: NumericForm, order: int = 6) -> NumericForm:
    """dd^c of a function, as a (1,1) density: (i/pi) d dbar f -> lap(f)/(4 pi).

    Normalized so that dd^c(-log h) is the first Chern form of a metric h on
    a line bundle; with this convention integrate_p1(ddc(f)) = 0 for global
    smooth f, and dd^c log|z|^2 carries unit mass at the origin.
    """
    if f.bidegree != (0, 0):
        raise ValueError("ddc applies to (0,0) forms")
    grid = f.grid
    data = {}
    for chart in CHARTS:
        lap = fd.laplacian(np.real(f.data[chart]), grid.spacing, order)
        data[chart] = lap / (4.0 * np.pi)
    return NumericForm(grid, (1, 1), data, name=f"ddc({f.name})" if f.name else "")
