"""Grouping localized records into complete 96-slot day profiles.

A profile is kept only when its local calendar day has exactly one
reading in each of the 96 quarter-hour slots. The two DST transition
days fail this by construction (92 readings in spring, 100 in autumn)
and are dropped, as are days with missing or duplicated intervals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from loadgen.datapipe.clock import local_epochs
from loadgen.datapipe.records import MeterRecords
from loadgen.datapipe.units import energy_to_power

SLOTS_PER_DAY = 96


@dataclass
class AssemblyReport:
    days_total: int = 0
    days_kept: int = 0
    days_dropped: int = 0


@dataclass
class DayProfileSet:
    """Columnar set of customer-day profiles (values in kW unless scaled)."""

    user_ids: np.ndarray          # (n,) str
    dates: np.ndarray             # (n,) datetime64[D], local calendar dates
    months: np.ndarray            # (n,) int64 in 1..12
    values: np.ndarray            # (n, 96) float64

    def __len__(self) -> int:
        return self.values.shape[0]


def assemble_days(records: MeterRecords) -> tuple[DayProfileSet, AssemblyReport]:
    """Group records by (user, local date) and keep complete days."""
    report = AssemblyReport()
    if len(records) == 0:
        empty = DayProfileSet(
            user_ids=np.array([], dtype=object),
            dates=np.array([], dtype="datetime64[D]"),
            months=np.array([], dtype=np.int64),
            values=np.zeros((0, SLOTS_PER_DAY)),
        )
        return empty, report

    local = local_epochs(records.ts_epoch)
    day = local // 86400
    slot = (local % 86400) // 900
    power = energy_to_power(records.energy_kwh)

    day_min = day.min()
    day_span = int(day.max() - day_min) + 1
    key = records.user_index * day_span + (day - day_min)

    order = np.lexsort((slot, key))
    key_s = key[order]
    slot_s = slot[order]
    power_s = power[order]

    uniq_keys, starts, counts = np.unique(key_s, return_index=True, return_counts=True)
    report.days_total = len(uniq_keys)

    candidates = counts == SLOTS_PER_DAY
    block_idx = starts[candidates][:, None] + np.arange(SLOTS_PER_DAY)
    if block_idx.size:
        complete = (slot_s[block_idx] == np.arange(SLOTS_PER_DAY)).all(axis=1)
    else:
        complete = np.zeros(0, dtype=bool)

    kept_keys = uniq_keys[candidates][complete]
    values = power_s[block_idx[complete]] if kept_keys.size else np.zeros((0, SLOTS_PER_DAY))

    user_idx = kept_keys // day_span
    day_int = kept_keys % day_span + day_min
    dates = day_int.astype("datetime64[D]")
    months = dates.astype("datetime64[M]").astype(np.int64) % 12 + 1
    user_ids = np.array([records.users[i] for i in user_idx], dtype=object)

    report.days_kept = len(kept_keys)
    report.days_dropped = report.days_total - report.days_kept
    return DayProfileSet(user_ids=user_ids, dates=dates, months=months, values=values), report
