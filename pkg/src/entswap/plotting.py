"""Figure rendering for sweep outputs, written next to the delimited files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .closed_form import frontier_negativity


def plot_time_series(records, path: str) -> None:
    """Negativity and energy against time, stacked panels, saved to path."""
    rows = [r for r in records if not r.frontier]
    t = [r.t for r in rows]
    fig, (ax_n, ax_u) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 5.0))
    ax_n.plot(t, [r.negativity for r in rows], lw=1.2, color="tab:blue")
    ax_n.set_ylabel("negativity N")
    ax_u.plot(t, [r.energy for r in rows], lw=1.2, color="tab:orange")
    ax_u.set_ylabel(r"energy U ($\hbar\omega$)")
    ax_u.set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_phase_diagram(records, path: str) -> None:
    """Trajectory in the (U, N) plane with the attainable-region frontier."""
    trajectory = [r for r in records if not r.frontier]
    frontier = sorted((r for r in records if r.frontier), key=lambda r: r.energy)
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    if frontier:
        ax.plot([r.energy for r in frontier], [r.negativity for r in frontier],
                "k--", lw=1.0, label="frontier")
    ax.plot([r.energy for r in trajectory], [r.negativity for r in trajectory],
            lw=1.0, color="tab:blue", label="trajectory")
    ax.set_xlabel(r"energy U ($\hbar\omega$)")
    ax.set_ylabel("negativity N")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_bound_scatter(report, path: str) -> None:
    """Sampled (U, N) points against the frontier curve."""
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    grid = np.linspace(-1.0, 0.0, 512)
    ax.plot(grid, [frontier_negativity(u) for u in grid], "k--", lw=1.0, label="frontier")
    if report.scatter:
        us, ns = zip(*report.scatter)
        ax.scatter(us, ns, s=4, alpha=0.4, color="tab:blue", label="samples")
    ax.set_xlabel(r"energy U ($\hbar\omega$)")
    ax.set_ylabel("negativity N")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
