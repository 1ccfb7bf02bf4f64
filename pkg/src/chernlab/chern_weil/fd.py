"""Centered finite-difference stencils on uniform grids.

Arrays are differentiated along grid axes with np.roll, which wraps at the
edges; callers must restrict to nodes at least ``stencil_reach(order)``
rings away from the boundary per application of a stencil.  The grid
geometry in :mod:`.grids` guarantees this on the evaluation disk.

Sixth order is the default throughout the package: the two-path curvature
comparison needs truncation errors a few orders below 1e-6 at n = 256, and
second-order stencils measurably cannot deliver that.
"""

from __future__ import annotations

from typing import Dict, Tuple

import numpy as np

# offset -> coefficient, for the first derivative times spacing
_D1: Dict[int, Dict[int, float]] = {
    2: {-1: -0.5, 1: 0.5},
    4: {-2: 1.0 / 12.0, -1: -2.0 / 3.0, 1: 2.0 / 3.0, 2: -1.0 / 12.0},
    6: {
        -3: -1.0 / 60.0,
        -2: 3.0 / 20.0,
        -1: -3.0 / 4.0,
        1: 3.0 / 4.0,
        2: -3.0 / 20.0,
        3: 1.0 / 60.0,
    },
}

# offset -> coefficient, for the second derivative times spacing^2
_D2: Dict[int, Dict[int, float]] = {
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    4: {
        -2: -1.0 / 12.0,
        -1: 4.0 / 3.0,
        0: -5.0 / 2.0,
        1: 4.0 / 3.0,
        2: -1.0 / 12.0,
    },
    6: {
        -3: 1.0 / 90.0,
        -2: -3.0 / 20.0,
        -1: 3.0 / 2.0,
        0: -49.0 / 18.0,
        1: 3.0 / 2.0,
        2: -3.0 / 20.0,
        3: 1.0 / 90.0,
    },
}

ORDERS = (2, 4, 6)


def stencil_reach(order: int) -> int:
    """Rings of nodes consumed by one stencil application."""
    if order not in ORDERS:
        raise ValueError(f"unsupported stencil order {order}; pick from {ORDERS}")
    return order // 2


def diff1(arr: np.ndarray, axis: int, spacing: float, order: int = 6) -> np.ndarray:
    """First derivative along a grid axis."""
    table = _D1.get(order)
    if table is None:
        raise ValueError(f"unsupported stencil order {order}; pick from {ORDERS}")
    out = np.zeros_like(arr, dtype=np.result_type(arr.dtype, np.float64))
    for offset, coeff in table.items():
        out += coeff * np.roll(arr, -offset, axis=axis)
    out /= spacing
    return out


def diff2(arr: np.ndarray, axis: int, spacing: float, order: int = 6) -> np.ndarray:
    """Second derivative along a grid axis."""
    table = _D2.get(order)
    if table is None:
        raise ValueError(f"unsupported stencil order {order}; pick from {ORDERS}")
    out = np.zeros_like(arr, dtype=np.result_type(arr.dtype, np.float64))
    for offset, coeff in table.items():
        out += coeff * np.roll(arr, -offset, axis=axis)
    out /= spacing * spacing
    return out


def d_z(arr: np.ndarray, spacing: float, order: int = 6, axes: Tuple[int, int] = (0, 1)) -> np.ndarray:
    """Wirtinger derivative d/dz = (d/dx - i d/dy)/2; axes = (x, y)."""
    ax, ay = axes
    return 0.5 * (diff1(arr, ax, spacing, order) - 1j * diff1(arr, ay, spacing, order))


def d_zbar(arr: np.ndarray, spacing: float, order: int = 6, axes: Tuple[int, int] = (0, 1)) -> np.ndarray:
    """Wirtinger derivative d/dzbar = (d/dx + i d/dy)/2."""
    ax, ay = axes
    return 0.5 * (diff1(arr, ax, spacing, order) + 1j * diff1(arr, ay, spacing, order))


def laplacian(arr: np.ndarray, spacing: float, order: int = 6, axes: Tuple[int, int] = (0, 1)) -> np.ndarray:
    """Flat Laplacian d^2/dx^2 + d^2/dy^2 in one stencil application."""
    ax, ay = axes
    return diff2(arr, ax, spacing, order) + diff2(arr, ay, spacing, order)
