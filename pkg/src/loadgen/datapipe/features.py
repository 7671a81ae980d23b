"""Conditioning features: cyclic month encoding and user intensity ranks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from loadgen.datapipe.days import DayProfileSet
from loadgen.errors import PipelineError

TOP_DAYS_FOR_INTENSITY = 5


def month_condition(month: float) -> tuple[float, float]:
    """(sin, cos) of the month angle; months lie on a circle of period 12.

    Non-integer months are allowed so conditions can be interpolated
    (e.g. 11.5 lands between November and December).
    """
    if not 0.0 < month <= 12.0:
        raise ValueError(f"month must be in (0, 12], got {month}")
    angle = 2.0 * np.pi * month / 12.0
    return float(np.sin(angle)), float(np.cos(angle))


def user_intensity(day_values: np.ndarray) -> float | None:
    """Typical power exchange of one user from their daily profiles (kW).

    Each day is summarized as the mean of the absolute power over its
    non-zero slots; the intensity is the mean of the five largest daily
    summaries (all of them when fewer than five days are active). Users
    whose days are all zero have no intensity.
    """
    day_values = np.atleast_2d(np.asarray(day_values, dtype=np.float64))
    magnitude = np.abs(day_values)
    nonzero = magnitude > 0.0
    counts = nonzero.sum(axis=1)
    active = counts > 0
    if not active.any():
        return None
    daily = magnitude[active].sum(axis=1) / counts[active]
    top = np.sort(daily)[-TOP_DAYS_FOR_INTENSITY:]
    return float(top.mean())


@dataclass
class IntensityTable:
    """Per-user intensity (kW) and rank in [0, 1]; parallel arrays."""

    user_ids: np.ndarray          # (u,) str, unique
    intensities: np.ndarray       # (u,) float64
    ranks: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.user_ids)

    def rank_of(self) -> dict:
        if self.ranks is None:
            raise PipelineError("ranks not computed yet")
        return dict(zip(self.user_ids, self.ranks))


def compute_intensities(days: DayProfileSet) -> tuple[IntensityTable, list[str]]:
    """Intensity per user; returns (table, users excluded for all-zero data)."""
    table_users = []
    table_values = []
    excluded = []
    for uid in sorted(set(days.user_ids.tolist())):
        mask = days.user_ids == uid
        intensity = user_intensity(days.values[mask])
        if intensity is None:
            excluded.append(uid)
        else:
            table_users.append(uid)
            table_values.append(intensity)
    table = IntensityTable(
        user_ids=np.array(table_users, dtype=object),
        intensities=np.array(table_values, dtype=np.float64),
    )
    return table, excluded


def rank_intensity(table: IntensityTable) -> IntensityTable:
    """Ranks spanning [0, 1]: ascending intensity, ties broken by user id."""
    n = len(table)
    if n < 2:
        raise PipelineError(f"ranking needs at least 2 users, got {n}")
    order = np.lexsort((table.user_ids.astype(str), table.intensities))
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = np.arange(n, dtype=np.float64) / (n - 1)
    return IntensityTable(user_ids=table.user_ids, intensities=table.intensities, ranks=ranks)
