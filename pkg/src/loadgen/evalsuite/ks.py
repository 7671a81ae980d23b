"""Two-sample Kolmogorov-Smirnov statistics, one per profile dimension."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from loadgen.errors import DimensionError


@dataclass
class KsReport:
    stats: np.ndarray     # (d,) per-dimension sup |F_A - F_B|

    @property
    def mean(self) -> float:
        return float(self.stats.mean())

    @property
    def max(self) -> float:
        return float(self.stats.max())


def ks_two_sample(x: np.ndarray, y: np.ndarray) -> float:
    """sup_t |F_x(t) - F_y(t)| over the pooled empirical CDFs."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    if x.size == 0 or y.size == 0:
        raise DimensionError("KS statistic needs non-empty samples")
    pooled = np.concatenate([x, y])
    f_x = np.searchsorted(x, pooled, side="right") / x.size
    f_y = np.searchsorted(y, pooled, side="right") / y.size
    return float(np.abs(f_x - f_y).max())


def ks_per_dimension(a: np.ndarray, b: np.ndarray) -> KsReport:
    """KS statistic between two (n, d) sample matrices, column by column."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise DimensionError(f"incompatible sample shapes {a.shape} and {b.shape}")
    stats = np.array([ks_two_sample(a[:, j], b[:, j]) for j in range(a.shape[1])])
    return KsReport(stats=stats)
