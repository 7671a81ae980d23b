"""Energy distance between profile distributions.

The statistic is 2 E||X-Y|| - E||X-X'|| - E||Y-Y'|| with Euclidean
norms; within-sample expectations are U-statistics (distinct pairs
only), which makes the estimate unbiased and zero in expectation for
identical distributions. On large sets it is evaluated on repeated
seeded subsamples and reported with a standard error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from loadgen.errors import DimensionError


@dataclass
class EnergyReport:
    estimate: float
    stderr: float | None     # None when computed from a single repeat
    subsample: int
    repeats: int
    per_repeat: list


def energy_statistic(a: np.ndarray, b: np.ndarray) -> float:
    """Full (non-subsampled) energy distance estimate between two sample sets."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape[1] != b.shape[1]:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    n, m = a.shape[0], b.shape[0]
    if n < 2 or m < 2:
        raise DimensionError("energy statistic needs at least 2 samples per set")
    between = cdist(a, b).mean()
    within_a = cdist(a, a).sum() / (n * (n - 1))
    within_b = cdist(b, b).sum() / (m * (m - 1))
    return float(2.0 * between - within_a - within_b)


def energy_distance(a: np.ndarray, b: np.ndarray, subsample: int, repeats: int,
                    seed: int) -> EnergyReport:
    """Mean +- stderr of the energy statistic over seeded subsample draws."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if subsample < 2:
        raise DimensionError(f"subsample size must be >= 2, got {subsample}")
    if subsample > min(a.shape[0], b.shape[0]):
        raise DimensionError(
            f"subsample {subsample} exceeds set sizes {a.shape[0]}/{b.shape[0]}"
        )
    if repeats < 1:
        raise DimensionError("repeats must be >= 1")
    children = np.random.SeedSequence(seed).spawn(repeats)
    values = []
    for child in children:
        rng = np.random.default_rng(child)
        sub_a = a[rng.choice(a.shape[0], size=subsample, replace=False)]
        sub_b = b[rng.choice(b.shape[0], size=subsample, replace=False)]
        values.append(energy_statistic(sub_a, sub_b))
    estimate = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / np.sqrt(repeats)) if repeats > 1 else None
    return EnergyReport(
        estimate=estimate, stderr=stderr, subsample=subsample,
        repeats=repeats, per_repeat=values,
    )
