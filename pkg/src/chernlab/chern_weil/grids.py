"""Two-chart sample grids on the Riemann sphere.

P1 is covered by the coordinate z and by w = 1/z.  Each chart is sampled on
the same square [-R, R]^2 (R = ``half_width``); quantities are trusted only
on the evaluation disk |coordinate| <= ``eval_radius``, with the band
outside it reserved for finite-difference stencils.  The two evaluation
disks overlap on the annulus 1/eval_radius <= |z| <= eval_radius, which is
where chart-consistency checks live.

The default geometry keeps six stencil rings between the evaluation disk
and the grid edge at the minimum allowed resolution n = 32, enough for the
composed sixth-order first-derivative stencils used by the curvature path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

CHARTS = ("z", "w")


@dataclass(frozen=True)
class ChartGrid:
    """Congruent square grids for the z- and w-charts of P1."""

    n: int
    half_width: float = 3.4
    eval_radius: float = 2.0

    def __post_init__(self) -> None:
        if self.n < 32:
            raise ValueError(f"grid needs n >= 32 nodes per axis, got {self.n}")
        if self.eval_radius <= 1.0:
            raise ValueError("eval_radius must exceed 1 so the charts overlap")
        margin = self.half_width - self.eval_radius
        if margin < 6 * self.spacing:
            raise ValueError(
                f"stencil margin too small: {margin:.3f} < 6 spacings "
                f"({6 * self.spacing:.3f}); increase half_width or n"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    def nodes(self, chart: str = "z") -> np.ndarray:
        """Complex nodes; axis 0 is the real direction, axis 1 imaginary."""
        if chart not in CHARTS:
            raise ValueError(f"unknown chart {chart!r}")
        v = self.axis
        return v[:, None] + 1j * v[None, :]

    def radii(self, chart: str = "z") -> np.ndarray:
        return np.abs(self.nodes(chart))

    def eval_mask(self, radius: float | None = None, chart: str = "z") -> np.ndarray:
        """Boolean mask of nodes within the trusted evaluation disk."""
        r = self.eval_radius if radius is None else radius
        if r > self.eval_radius:
            raise ValueError(f"radius {r} exceeds eval_radius {self.eval_radius}")
        return self.radii(chart) <= r

    def interior_mask(self, chart: str = "z") -> np.ndarray:
        """Nodes with |coordinate| <= 1; the two interiors cover P1."""
        return self.radii(chart) <= 1.0
