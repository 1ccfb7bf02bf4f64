"""Hermitian metric samples on holomorphic bundles over P1.

A bundle is presented concretely: a holomorphic frame on each chart, a
holomorphic transition matrix g(z) relating them on the overlap, and the
metric sampled as an (n, n, r, r) positive matrix field per chart.  The
compatibility law ties the two samples together,

    h_z(z) = g(z)^* h_w(1/z) g(z),

and is what every chart-consistency check in this package ultimately tests.

Line bundles O(k) come with their Fubini-Study metrics built in:
h_z = (1 + |z|^2)^(-k), h_w = (1 + |w|^2)^(-k), transition g(z) = z^(-k).
Rank 0 samples (arrays of shape (n, n, 0, 0)) are legal and arise as the
zero end of a short exact sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from .grids import CHARTS, ChartGrid


class InvalidMetricError(ValueError):
    """Sample is not a hermitian positive-definite field."""


Transition = Callable[[np.ndarray], np.ndarray]


@dataclass
class MetricSample:
    """Per-chart samples of a hermitian metric in holomorphic frames."""

    grid: ChartGrid
    rank: int
    h: Dict[str, np.ndarray]
    transition: Optional[Transition] = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise InvalidMetricError("rank must be nonnegative")
        n = self.grid.n
        for chart in CHARTS:
            if chart not in self.h:
                raise InvalidMetricError(f"missing sample for chart {chart!r}")
            arr = np.asarray(self.h[chart], dtype=complex)
            if arr.shape != (n, n, self.rank, self.rank):
                raise InvalidMetricError(
                    f"chart {chart!r} sample has shape {arr.shape}, "
                    f"expected {(n, n, self.rank, self.rank)}"
                )
            self.h[chart] = arr

    def validate(self, hermitian_tol: float = 1e-10) -> None:
        """Check hermitian symmetry everywhere and positivity on the grid."""
        if self.rank == 0:
            return
        for chart in CHARTS:
            arr = self.h[chart]
            skew = np.max(np.abs(arr - np.conj(np.swapaxes(arr, -1, -2))))
            if skew > hermitian_tol:
                raise InvalidMetricError(
                    f"chart {chart!r} sample deviates from hermitian by {skew:.3e}"
                )
            eigs = np.linalg.eigvalsh(arr)
            smallest = float(np.min(eigs))
            if smallest <= 0.0:
                raise InvalidMetricError(
                    f"chart {chart!r} sample is not positive definite "
                    f"(min eigenvalue {smallest:.3e})"
                )

    def scalar(self, chart: str) -> np.ndarray:
        """Rank-1 sample as a plain real (n, n) array."""
        if self.rank != 1:
            raise InvalidMetricError(f"scalar view needs rank 1, have rank {self.rank}")
        return self.h[chart][:, :, 0, 0].real


def _fs_weight(nodes: np.ndarray, k: int) -> np.ndarray:
    return (1.0 + np.abs(nodes) ** 2) ** (-float(k))


def fubini_study_line(grid: ChartGrid, k: int) -> MetricSample:
    """O(k) with the k-th power of the Fubini-Study metric."""
    h = {}
    for chart in CHARTS:
        w = _fs_weight(grid.nodes(chart), k)
        h[chart] = w[:, :, None, None].astype(complex)

    def transition(z: np.ndarray) -> np.ndarray:
        g = np.asarray(z, dtype=complex) ** (-k)
        return g[..., None, None]

    return MetricSample(grid, 1, h, transition, name=f"O({k}),FS")


def line_bundle_metric(
    grid: ChartGrid,
    k: int,
    weight_z: Callable[[np.ndarray], np.ndarray],
    weight_w: Callable[[np.ndarray], np.ndarray],
    name: str = "",
) -> MetricSample:
    """O(k) with metric FS^k * exp(-f), f given per chart.

    The weight f is a global smooth function on P1, handed over as the two
    chart representatives f_z and f_w = f_z(1/w); consistency of the pair is
    the caller's contract and is picked up by the overlap checks downstream.
    """
    base = fubini_study_line(grid, k)
    h = {}
    for chart, fn in (("z", weight_z), ("w", weight_w)):
        f = np.asarray(fn(grid.nodes(chart)), dtype=float)
        if f.shape != (grid.n, grid.n):
            raise InvalidMetricError(f"weight on chart {chart!r} has shape {f.shape}")
        h[chart] = base.h[chart] * np.exp(-f)[:, :, None, None]
    return MetricSample(grid, 1, h, base.transition, name=name or f"O({k}),weighted")


def zero_rank_metric(grid: ChartGrid) -> MetricSample:
    """The metric on the zero bundle; shows up as E3 = 0 in sequences."""
    n = grid.n
    h = {chart: np.zeros((n, n, 0, 0), dtype=complex) for chart in CHARTS}

    def transition(z: np.ndarray) -> np.ndarray:
        shape = np.shape(z) + (0, 0)
        return np.zeros(shape, dtype=complex)

    return MetricSample(grid, 0, h, transition, name="0")


def direct_sum(a: MetricSample, b: MetricSample, name: str = "") -> MetricSample:
    """Block-diagonal metric on the direct sum bundle."""
    if a.grid is not b.grid and a.grid != b.grid:
        raise InvalidMetricError("direct sum needs samples on the same grid")
    n = a.grid.n
    r = a.rank + b.rank
    h = {}
    for chart in CHARTS:
        block = np.zeros((n, n, r, r), dtype=complex)
        block[:, :, : a.rank, : a.rank] = a.h[chart]
        block[:, :, a.rank :, a.rank :] = b.h[chart]
        h[chart] = block

    ta, tb = a.transition, b.transition
    transition = None
    if ta is not None and tb is not None:

        def transition(z: np.ndarray, _ta=ta, _tb=tb, _ra=a.rank, _rb=b.rank) -> np.ndarray:
            ga = _ta(z)
            gb = _tb(z)
            shape = ga.shape[:-2] + (_ra + _rb, _ra + _rb)
            g = np.zeros(shape, dtype=complex)
            g[..., :_ra, :_ra] = ga
            g[..., _ra:, _ra:] = gb
            return g

    label = name or f"{a.name}(+){b.name}"
    return MetricSample(a.grid, r, h, transition, name=label)


def transition_residual(m: MetricSample, radii: tuple = (0.8, 1.25), samples: int = 64) -> float:
    """Max violation of h_z(z) = g(z)^* h_w(1/z) g(z) on overlap circles.

    Points are taken on circles that are nodes of neither chart, so both
    samples are bilinearly resampled; the figure of merit is therefore
    O(spacing^2) even for an exactly compatible metric.
    """
    if m.transition is None:
        raise InvalidMetricError("sample carries no transition matrix")
    if m.rank == 0:
        return 0.0
    from .forms import resample

    worst = 0.0
    theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    for r0 in radii:
        z = r0 * np.exp(1j * theta)
        hz = resample(m.h["z"], m.grid, z)
        hw = resample(m.h["w"], m.grid, 1.0 / z)
        g = m.transition(z)
        gh = np.conj(np.swapaxes(g, -1, -2))
        residual = np.max(np.abs(hz - gh @ hw @ g))
        worst = max(worst, float(residual))
    return worst
