"""Figures for enumeration reports (matplotlib, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .enumeration import ColoringReport  # noqa: E402


def plot_report(report: ColoringReport, path) -> Path:
    """Bar chart of realized chains per diary id, with subtree coverage when present."""
    path = Path(path)
    ids = sorted(report.counts)
    counts = [report.counts[k] for k in ids]
    panels = 2 if report.subtrees else 1
    fig, axes = plt.subplots(1, panels, figsize=(5 * panels, 3.6), squeeze=False)
    ax = axes[0][0]
    ax.bar([str(k) for k in ids], counts, color="#4477aa")
    ax.set_yscale("log" if counts and max(counts) > 50 * max(1, min(counts)) else "linear")
    ax.set_xlabel("diary id")
    ax.set_ylabel("chains")
    ax.set_title(f"{report.p}-chains by diary, depth {report.depth}")
    if len(ids) > 20:
        ax.set_xticks(ax.get_xticks()[:: max(1, len(ids) // 20)])
    if report.subtrees:
        ax2 = axes[0][1]
        every = sorted({k for v in report.subtrees for k in (*v.realized, *v.missing)})
        hits = [sum(k in v.realized for v in report.subtrees) for k in every]
        ax2.bar([str(k) for k in every], hits, color="#228833")
        ax2.axhline(len(report.subtrees), color="black", lw=0.8, ls="--")
        ax2.set_xlabel("diary id")
        ax2.set_ylabel("subtrees realizing it")
        ax2.set_title(f"persistence in {len(report.subtrees)} subtrees")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
