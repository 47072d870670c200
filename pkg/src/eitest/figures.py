"""Render benchmark panels to image files.

One figure per sweep: TPR as solid lines and FPR as dashed lines, one color
per method, with the significance level as a dotted reference. Uses the Agg
backend so rendering works without a display.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import BenchReport

_AXIS_LABELS = {
    "order": "impact order q",
    "snr": "signal-to-noise ratio",
    "increase": "variance increase",
    "dof": "tail degrees of freedom",
    "events": "events per series",
    "length": "series length",
}


def _use_log_x(values: tuple[float, ...]) -> bool:
    return min(values) > 0 and max(values) / min(values) >= 8.0


def render_panel(report: BenchReport, path: str, dpi: int = 150) -> None:
    """Write one PNG (or any extension matplotlib recognizes) for a report."""
    config = report.config
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for method in config.methods:
        rows = sorted(
            (r for r in report.rows if r.method == method), key=lambda r: r.value
        )
        xs = [r.value for r in rows]
        line, = ax.plot(xs, [r.tpr for r in rows], marker="o", markersize=3.5,
                        label=f"{method} TPR")
        ax.plot(xs, [r.fpr for r in rows], marker="x", markersize=3.5,
                linestyle="--", color=line.get_color(), alpha=0.7,
                label=f"{method} FPR")
    ax.axhline(config.alpha, color="gray", linestyle=":", linewidth=1)
    if _use_log_x(config.values):
        ax.set_xscale("log")
    ax.set_ylim(-0.03, 1.05)
    ax.set_xlabel(_AXIS_LABELS.get(config.parameter, config.parameter))
    ax.set_ylabel("rate")
    ax.set_title(f"{config.model} model, sweeping {config.parameter}")
    ax.legend(fontsize=7, ncol=2, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
