"""The weighted integral over P1 that defines secondary classes.

integrate_log_weight computes  integral over P1 of log|u|^2 times a (1,1)
density F.  The weight log|u|^2 is singular at u = 0 and u = infinity but
integrable against smooth densities; a grid in log-radius t = log|u| and
angle absorbs both singularities, because the area element contributes
e^{2t} dt dtheta on the unit-disk side (and the mirror factor on the other
chart), so the integrand 2t F e^{-2|t|} is smooth and decays exponentially.
Midpoint-in-t times periodic-trapezoid-in-theta then converges faster than
any power of the step.

Calibration identity: the Fubini-Study density of O(1) integrates to -1
against this weight.
"""

from __future__ import annotations

from typing import Callable, Optional, Union

import numpy as np

from .forms import NumericForm, resample

Density = Callable[[np.ndarray], np.ndarray]


def _weight_tables(t: np.ndarray, weight: str):
    """Weight values on the inner (|u| <= 1) and outer (via w = 1/u) halves.

    "plain" is the current log|u|^2 itself, the kernel with
    dd^c [log|u|^2] = delta_0 - delta_infinity; its pairing with the
    Fubini-Study density is exactly 0 by the radial symmetry of
    log x / (1+x)^2.  "section0" is log ||s_0||^2 for the Fubini-Study norm
    of the O(1) section vanishing at u = 0; it differs from "plain" by the
    globally smooth -log(1 + |u|^2) and pairs with the Fubini-Study density
    to exactly -1.
    """
    if weight == "plain":
        return 2.0 * t, 2.0 * t
    if weight == "section0":
        inner = 2.0 * t - np.log1p(np.exp(2.0 * t))
        outer = -np.log1p(np.exp(-2.0 * t))
        return inner, outer
    raise ValueError(f"unknown weight {weight!r}; use 'plain' or 'section0'")


def integrate_log_weight(
    density: Union[NumericForm, Density],
    density_w: Optional[Density] = None,
    t_max: float = 26.0,
    n_t: int = 4000,
    n_theta: int = 96,
    weight: str = "plain",
) -> float:
    """Integral of log|u|^2 * F over P1 for a (1,1) density F.

    F may be a NumericForm (chart arrays are bilinearly resampled onto the
    polar grid, so accuracy is then limited to O(spacing^2)) or a callable
    giving the z-chart density; an optional second callable gives the
    w-chart density used for |u| > 1.  Without it the z-chart callable is
    trusted out to large |u|, which is fine whenever it decays like |u|^-4.

    weight="section0" replaces log|u|^2 by the Fubini-Study section norm
    log(|u|^2/(1+|u|^2)); see _weight_tables.
    """
    dt = 2.0 * t_max / n_t
    t = -t_max + (np.arange(n_t) + 0.5) * dt
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    w_theta = 2.0 * np.pi / n_theta

    neg = t[t <= 0.0]
    pos = t[t > 0.0]
    weight_inner, _ = _weight_tables(neg, weight)
    _, weight_outer = _weight_tables(pos, weight)
    phase = np.exp(1j * theta)

    if isinstance(density, NumericForm):
        if density.bidegree != (1, 1):
            raise ValueError("log-weight integral needs a (1,1) form")
        grid = density.grid

        def f_inner(u: np.ndarray) -> np.ndarray:
            return np.real(resample(density.data["z"], grid, u))

        def f_outer_w(w: np.ndarray) -> np.ndarray:
            return np.real(resample(density.data["w"], grid, w))

    else:
        f_inner = density
        if density_w is not None:
            f_outer_w = density_w
        else:

            def f_outer_w(w: np.ndarray) -> np.ndarray:
                # fall back to the z-chart density times the Jacobian |w|^-4
                r4 = np.abs(w) ** 4
                return np.asarray(density(1.0 / w)) / r4

    total = 0.0
    if neg.size:
        u = np.exp(neg)[:, None] * phase[None, :]
        vals = np.asarray(f_inner(u), dtype=float)
        total += float(np.sum(vals * (weight_inner * np.exp(2.0 * neg))[:, None]))
    if pos.size:
        w = np.exp(-pos)[:, None] * np.conj(phase)[None, :]
        vals = np.asarray(f_outer_w(w), dtype=float)
        total += float(np.sum(vals * (weight_outer * np.exp(-2.0 * pos))[:, None]))
    return total * dt * w_theta
