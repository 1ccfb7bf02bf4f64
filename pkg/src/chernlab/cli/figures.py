"""Figure output for scenario reports.

Every renderer writes a PNG next to the delimited data it illustrates and
returns the file name.  The Agg backend is forced so the CLI never needs a
display; styling is kept to matplotlib defaults apart from axis labels.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_SAVE_OPTS = {"dpi": 110, "metadata": {"Software": "chernlab"}}


def heatmap(
    path: Path,
    data: np.ndarray,
    title: str,
    extent: Optional[Sequence[float]] = None,
    log_scale: bool = False,
) -> str:
    values = np.abs(data) if log_scale else np.real(data)
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    if log_scale:
        floor = max(values.max() * 1e-12, 1e-300)
        shown = np.log10(np.maximum(values, floor))
        label = "log10 |value|"
    else:
        shown = values
        label = "value"
    im = ax.imshow(
        shown.T,
        origin="lower",
        extent=list(extent) if extent is not None else None,
        cmap="viridis",
        aspect="equal",
    )
    fig.colorbar(im, ax=ax, label=label)
    ax.set_title(title)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path.name


def convergence_plot(
    path: Path,
    xs: Sequence[float],
    ys: Sequence[float],
    xlabel: str,
    ylabel: str,
    title: str,
    reference_slope: Optional[float] = None,
) -> str:
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.loglog(xs, ys, "o-", label=ylabel)
    if reference_slope is not None and len(xs) >= 2 and ys[0] > 0:
        xs_arr = np.asarray(xs, dtype=float)
        guide = ys[0] * (xs_arr / xs_arr[0]) ** reference_slope
        ax.loglog(xs_arr, guide, "k--", alpha=0.6, label=f"slope {reference_slope:g}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path.name


def error_bars(
    path: Path,
    labels: Sequence[str],
    errors: Sequence[float],
    title: str,
    tolerance: Optional[float] = None,
) -> str:
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    positions = np.arange(len(labels))
    floor = 1e-300
    ax.bar(positions, np.maximum(np.abs(errors), floor), color="#3b6ea5")
    ax.set_yscale("log")
    if tolerance is not None:
        ax.axhline(tolerance, color="crimson", linestyle="--", label="tolerance")
        ax.legend()
    ax.set_xticks(positions)
    ax.set_xticklabels(labels)
    ax.set_ylabel("absolute error")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path.name


def line_plot(
    path: Path,
    xs: Sequence[float],
    series: Sequence[tuple],
    xlabel: str,
    ylabel: str,
    title: str,
) -> str:
    """Plot labelled (label, ys) traces against a shared x axis."""
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for label, ys in series:
        ax.plot(xs, ys, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path.name
