"""Grouped empirical CDF tables and mean-profile comparisons."""

from __future__ import annotations

import numpy as np

from loadgen.errors import DimensionError, EmptyFilterError
from loadgen.evalsuite.sampleset import SampleSet

CDF_GRID_POINTS = 512

SIZE_CLASS_BOUNDS = {
    "small": (0.0, 0.3),
    "medium": (0.3, 0.7),
    "large": (0.7, 1.0),
}

GROUPINGS = ("month", "hour", "size", "interpolation")


def size_class_mask(ranks: np.ndarray, size_class: str) -> np.ndarray:
    """Small = bottom 30% of ranks, large = top 30%, medium = the rest."""
    if size_class == "small":
        return ranks <= 0.3
    if size_class == "large":
        return ranks >= 0.7
    if size_class == "medium":
        return (ranks > 0.3) & (ranks < 0.7)
    raise ValueError(f"unknown size class {size_class!r}")


def ecdf_on_grid(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Fraction of values <= t for each grid point t."""
    values = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if values.size == 0:
        raise DimensionError("cannot build a CDF from an empty group")
    return np.searchsorted(values, grid, side="right") / values.size


def group_values(samples: SampleSet, grouping: str) -> dict:
    """Flattened value pools keyed by group name."""
    if grouping == "month":
        months = samples.months
        return {
            f"m{m:g}": samples.values[months == m].ravel()
            for m in np.unique(months)
        }
    if grouping == "hour":
        return {
            f"h{h:02d}": samples.values[:, 4 * h:4 * h + 4].ravel()
            for h in range(samples.values.shape[1] // 4)
        }
    if grouping == "size":
        out = {}
        for name in ("small", "medium", "large"):
            mask = size_class_mask(samples.ranks, name)
            if mask.any():
                out[name] = samples.values[mask].ravel()
        return out
    if grouping == "interpolation":
        # Whole-set pools; the sets themselves carry the condition labels.
        return {"all": samples.values.ravel()}
    raise ValueError(f"unknown grouping {grouping!r}")


def cdf_grid(pools: list[np.ndarray], points: int = CDF_GRID_POINTS) -> np.ndarray:
    """Fixed evaluation grid spanning the pooled value range."""
    lo = min(float(p.min()) for p in pools if p.size)
    hi = max(float(p.max()) for p in pools if p.size)
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, points)


def cdf_columns(sets: list[SampleSet], grouping: str) -> tuple[np.ndarray, dict]:
    """(grid, {"label/group": cdf array}) for one grouping across all sets."""
    if grouping not in GROUPINGS:
        raise ValueError(f"unknown grouping {grouping!r}; expected one of {GROUPINGS}")
    grouped = {s.label: group_values(s, grouping) for s in sets}
    pools = [v for groups in grouped.values() for v in groups.values()]
    grid = cdf_grid(pools)
    columns = {}
    for label, groups in grouped.items():
        for name, pool in groups.items():
            key = label if grouping == "interpolation" else f"{label}/{name}"
            columns[key] = ecdf_on_grid(pool, grid)
    return grid, columns


def mean_profile_table(sets: list[SampleSet], month: float, size_class: str,
                       samples_per_set: int = 10, seed: int = 0) -> dict:
    """96-point mean curve plus seeded sample profiles per set, under one filter."""
    rng = np.random.default_rng(seed)
    out = {}
    for s in sets:
        mask = (s.months == month) & size_class_mask(s.ranks, size_class)
        if not mask.any():
            raise EmptyFilterError(
                f"set {s.label!r} has no profiles for month={month:g}, class={size_class}"
            )
        selected = s.values[mask]
        idx = rng.choice(selected.shape[0], size=min(samples_per_set, selected.shape[0]),
                         replace=False)
        out[s.label] = {"mean": selected.mean(axis=0), "samples": selected[idx]}
    return out
