"""Static figures from trajectory tables.

Three kinds: ``states`` (all 3n coordinates vs time), ``v2`` (the squared-
norm Lyapunov channel), and ``max_norm`` (largest agent norm with a marker
at the pi chart boundary).  Rendered with matplotlib to the format implied
by the output suffix (SVG by default in the CLI).
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .tables import TrajectoryTable

__all__ = ["FIGURE_KINDS", "render_figure"]

FIGURE_KINDS = ("states", "v2", "max_norm")


def render_figure(table: TrajectoryTable, kind: str, out_path) -> Path:
    """Render one figure kind for a trajectory table and save it."""
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; use one of {FIGURE_KINDS}")
    if table.times.size == 0:
        raise ValueError("trajectory table is empty")

    out_path = Path(out_path)
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    t = table.times

    if kind == "states":
        n = table.n
        colors = plt.cm.tab10.colors
        for i in range(n):
            for c in range(3):
                ax.plot(
                    t,
                    table.states[:, i, c],
                    lw=0.9,
                    color=colors[i % len(colors)],
                    alpha=(1.0, 0.75, 0.5)[c],
                    label=f"agent {i + 1}" if c == 0 else None,
                )
        ax.set_ylabel("axis-angle coordinates (rad)")
        if n <= 8:
            ax.legend(loc="best", fontsize=8)
    elif kind == "v2":
        ax.plot(t, table.v2, lw=1.2, color="tab:blue")
        ax.set_ylabel(r"$\frac{1}{2}\sum_i \|x_i\|^2$")
    else:
        ax.plot(t, table.max_norm, lw=1.2, color="tab:red")
        ax.axhline(math.pi, ls="--", lw=1.0, color="k")
        ax.annotate(
            "$\\pi$", xy=(t[-1], math.pi), xytext=(-12, 4),
            textcoords="offset points", fontsize=11,
        )
        ax.set_ylabel(r"$\max_i \|x_i\|$ (rad)")

    ax.set_xlabel("time (s)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
