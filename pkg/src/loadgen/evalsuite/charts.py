"""Optional SVG line charts rendered from the same data as the CSV tables."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from loadgen.evalsuite.clustering import ClusterReport  # noqa: E402

# Stable ids inside the SVG output; no creation timestamp.
matplotlib.rcParams["svg.hashsalt"] = "loadgen"
_SAVE_KW = {"format": "svg", "metadata": {"Date": None}}


def chart_mean_profiles(table: dict, path: Path, title: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    for label in sorted(table):
        entry = table[label]
        for row in entry["samples"]:
            ax.plot(row, alpha=0.2, linewidth=0.6)
        ax.plot(entry["mean"], linewidth=2.0, label=f"{label} mean")
    ax.set_xlabel("quarter-hour slot")
    ax.set_ylabel("scaled power")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def chart_cdfs(grid, columns: dict, path: Path, title: str) -> None:
    """One subplot per group, one CDF line per set."""
    by_group: dict[str, dict[str, object]] = {}
    for key, cdf in columns.items():
        label, _, group = key.partition("/")
        by_group.setdefault(group or "all", {})[label] = cdf
    groups = sorted(by_group)
    cols = min(4, len(groups))
    rows = math.ceil(len(groups) / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 2.6 * rows), squeeze=False)
    for i, group in enumerate(groups):
        ax = axes[i // cols][i % cols]
        for label in sorted(by_group[group]):
            ax.plot(grid, by_group[group][label], label=label, linewidth=1.0)
        ax.set_title(group, fontsize=9)
        ax.tick_params(labelsize=7)
    for i in range(len(groups), rows * cols):
        axes[i // cols][i % cols].axis("off")
    axes[0][0].legend(fontsize=7)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def chart_clusters(report: ClusterReport, path: Path) -> None:
    cols = min(4, report.k)
    rows = math.ceil(report.k / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 2.6 * rows), squeeze=False)
    ref = "train" if "train" in report.counts else sorted(report.counts)[0]
    for j in range(report.k):
        ax = axes[j // cols][j % cols]
        for label in sorted(report.means):
            ax.plot(report.means[label][j], label=label, linewidth=1.0)
        ax.set_title(f"cluster {j} (n={int(report.counts[ref][j])})", fontsize=9)
        ax.tick_params(labelsize=7)
    for j in range(report.k, rows * cols):
        axes[j // cols][j % cols].axis("off")
    axes[0][0].legend(fontsize=7)
    fig.suptitle("per-cluster mean profiles")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
