"""Training-ready dataset: filtered, scaled, conditioned, split.

Customers whose intensity exceeds 100 kW are dropped (the boundary is
inclusive: exactly 100 kW stays), ranks are recomputed over the
survivors, and every power value is divided by 100 kW. The result is
stored as one columnar .npz file with an embedded JSON metadata block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from loadgen.datapipe.days import DayProfileSet
from loadgen.datapipe.features import IntensityTable, rank_intensity
from loadgen.datapipe.units import SCALE_KW, scale_power
from loadgen.errors import PipelineError

INTENSITY_LIMIT_KW = 100.0
_FORMAT = "loadgen-prepared-v1"


@dataclass
class PreparedDataset:
    values: np.ndarray        # (n, 96) scaled power
    months: np.ndarray        # (n,) int64
    ranks: np.ndarray         # (n,) float64 per-profile user rank
    conditions: np.ndarray    # (n, 3) [month_sin, month_cos, rank]
    user_ids: np.ndarray      # (n,) unicode
    dates: np.ndarray         # (n,) datetime64[D]
    is_test: np.ndarray       # (n,) bool
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.values.shape[0]

    def subset(self, mask: np.ndarray) -> "PreparedDataset":
        return PreparedDataset(
            values=self.values[mask], months=self.months[mask], ranks=self.ranks[mask],
            conditions=self.conditions[mask], user_ids=self.user_ids[mask],
            dates=self.dates[mask], is_test=self.is_test[mask], meta=dict(self.meta),
        )

    @property
    def train(self) -> "PreparedDataset":
        return self.subset(~self.is_test)

    @property
    def test(self) -> "PreparedDataset":
        return self.subset(self.is_test)


def filter_and_scale(days: DayProfileSet, table: IntensityTable) -> tuple[PreparedDataset, IntensityTable]:
    """Apply the intensity cutoff, rescale, and attach condition vectors.

    ``table`` must carry ranks already (they are recomputed here after
    the cutoff); the split labels start out all-train and are filled in
    by the caller.
    """
    if table.ranks is None:
        raise PipelineError("intensity table must be ranked before filtering")
    keep = table.intensities <= INTENSITY_LIMIT_KW
    if keep.sum() < 2:
        raise PipelineError(
            f"fewer than 2 users at or under {INTENSITY_LIMIT_KW:.0f} kW; cannot build a dataset"
        )
    survivors = rank_intensity(
        IntensityTable(user_ids=table.user_ids[keep], intensities=table.intensities[keep])
    )
    rank_by_user = survivors.rank_of()

    profile_keep = np.array([u in rank_by_user for u in days.user_ids], dtype=bool)
    values = scale_power(days.values[profile_keep])
    months = days.months[profile_keep]
    user_ids = np.asarray(days.user_ids[profile_keep], dtype=str)
    dates = days.dates[profile_keep]
    ranks = np.array([rank_by_user[u] for u in user_ids], dtype=np.float64)

    angle = 2.0 * np.pi * months / 12.0
    conditions = np.column_stack([np.sin(angle), np.cos(angle), ranks])

    dataset = PreparedDataset(
        values=values, months=months, ranks=ranks, conditions=conditions,
        user_ids=user_ids, dates=dates, is_test=np.zeros(len(values), dtype=bool),
        meta={
            "format": _FORMAT,
            "scale_kw": SCALE_KW,
            "users_retained": int(keep.sum()),
            "users_dropped_over_limit": int((~keep).sum()),
        },
    )
    return dataset, survivors


def save_prepared(path: Path | str, dataset: PreparedDataset) -> None:
    np.savez_compressed(
        Path(path),
        values=dataset.values,
        months=dataset.months,
        ranks=dataset.ranks,
        conditions=dataset.conditions,
        user_ids=np.asarray(dataset.user_ids, dtype=str),
        dates=dataset.dates.astype(np.int64),
        is_test=dataset.is_test,
        meta=np.array(json.dumps(dataset.meta, sort_keys=True)),
    )


def load_prepared(path: Path | str) -> PreparedDataset:
    path = Path(path)
    if not path.exists():
        raise PipelineError(f"prepared dataset not found: {path}")
    with np.load(path) as npz:
        meta = json.loads(str(npz["meta"]))
        if meta.get("format") != _FORMAT:
            raise PipelineError(f"{path} is not a prepared dataset (format={meta.get('format')})")
        return PreparedDataset(
            values=npz["values"], months=npz["months"], ranks=npz["ranks"],
            conditions=npz["conditions"], user_ids=npz["user_ids"],
            dates=npz["dates"].astype("datetime64[D]"), is_test=npz["is_test"],
            meta=meta,
        )
