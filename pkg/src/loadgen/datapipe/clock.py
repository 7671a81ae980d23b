"""UTC to Central European local time.

Meter timestamps are UTC, but customers live on CET/CEST: +1 h in
standard time and +2 h while EU daylight saving is active (between the
last Sundays of March and October, switching at 01:00 UTC). The rule is
implemented directly so it can be applied to whole epoch arrays; the
test suite cross-checks it against the IANA tz database.
"""

from __future__ import annotations

import functools
from datetime import datetime, timedelta, timezone

import numpy as np

STANDARD_OFFSET_S = 3600
DST_OFFSET_S = 7200


def _last_sunday(year: int, month: int) -> datetime:
    d = datetime(year, month + 1, 1, tzinfo=timezone.utc) - timedelta(days=1)
    return d - timedelta(days=(d.weekday() + 1) % 7)


@functools.lru_cache(maxsize=None)
def dst_bounds_utc(year: int) -> tuple[datetime, datetime]:
    """UTC instants between which daylight saving is active in ``year``."""
    start = _last_sunday(year, 3).replace(hour=1)
    end = _last_sunday(year, 10).replace(hour=1)
    return start, end


def utc_to_local(ts: datetime) -> datetime:
    """Naive CET/CEST wall time for one UTC instant.

    Naive input is interpreted as UTC.
    """
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    else:
        ts = ts.astimezone(timezone.utc)
    start, end = dst_bounds_utc(ts.year)
    offset = DST_OFFSET_S if start <= ts < end else STANDARD_OFFSET_S
    return (ts + timedelta(seconds=offset)).replace(tzinfo=None)


def local_epochs(ts_epoch: np.ndarray) -> np.ndarray:
    """Shift an int64 array of UTC epoch seconds to local wall-clock epochs.

    The result is "seconds since 1970-01-01 00:00 local", convenient for
    extracting local calendar days (// 86400) and slots (% 86400 // 900).
    """
    ts_epoch = np.asarray(ts_epoch, dtype=np.int64)
    if ts_epoch.size == 0:
        return ts_epoch.copy()
    y_min = datetime.fromtimestamp(int(ts_epoch.min()), tz=timezone.utc).year
    y_max = datetime.fromtimestamp(int(ts_epoch.max()), tz=timezone.utc).year
    transitions = []
    for year in range(y_min - 1, y_max + 2):
        start, end = dst_bounds_utc(year)
        transitions.append(int(start.timestamp()))
        transitions.append(int(end.timestamp()))
    # Transitions alternate start/end, so an odd insertion index means DST.
    in_dst = np.searchsorted(np.array(transitions), ts_epoch, side="right") % 2 == 1
    return ts_epoch + np.where(in_dst, DST_OFFSET_S, STANDARD_OFFSET_S)
