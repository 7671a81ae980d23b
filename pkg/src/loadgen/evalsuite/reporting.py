"""CSV/JSON writers for evaluation artifacts (deterministic output)."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from loadgen.evalsuite.clustering import ClusterReport


def jsonable(obj):
    """Recursively convert numpy scalars/arrays so json can serialize them."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(jsonable(payload), sort_keys=True, indent=2) + "\n")


def write_cdf_csv(path: Path, grid: np.ndarray, columns: dict) -> None:
    names = sorted(columns)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value"] + names)
        for i, t in enumerate(grid):
            writer.writerow([repr(float(t))] + [repr(float(columns[n][i])) for n in names])


def write_mean_profile_csv(path: Path, table: dict) -> None:
    """Columns: slot, then <label>_mean and <label>_sample<i> per set."""
    labels = sorted(table)
    header = ["slot"]
    series = []
    for label in labels:
        header.append(f"{label}_mean")
        series.append(table[label]["mean"])
        for i, row in enumerate(table[label]["samples"]):
            header.append(f"{label}_sample{i}")
            series.append(row)
    n_slots = series[0].shape[0]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for slot in range(n_slots):
            writer.writerow([slot] + [repr(float(col[slot])) for col in series])


def write_cluster_csv(path: Path, report: ClusterReport) -> None:
    """One row per (cluster, set): count plus the 96-dim mean profile."""
    labels = sorted(report.counts)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        d = report.centroids.shape[1]
        writer.writerow(["cluster", "set", "count"] + [f"v{j}" for j in range(d)])
        for j in range(report.k):
            writer.writerow(
                [j, "centroid", ""] + [repr(float(v)) for v in report.centroids[j]]
            )
            for label in labels:
                writer.writerow(
                    [j, label, int(report.counts[label][j])]
                    + [repr(float(v)) for v in report.means[label][j]]
                )
