"""Raw meter CSV ingestion.

File contract: header ``user_id,timestamp_utc,energy_kwh``, one row per
15-minute interval, RFC 3339 UTC timestamps, energy in kWh over the
interval (negative = net generation). Malformed rows are collected into
a report; the file is rejected outright when more than 1% of its data
rows are malformed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from loadgen.errors import IngestError

HEADER = "user_id,timestamp_utc,energy_kwh"
MALFORMED_ABORT_FRACTION = 0.01
_REPORT_DETAIL_CAP = 1000
_VALID_MINUTES = (0, 15, 30, 45)


class RawMeterRecord(NamedTuple):
    user_id: str
    timestamp: datetime
    energy_kwh: float


@dataclass
class IngestReport:
    rows_total: int = 0
    rows_ok: int = 0
    malformed: list = field(default_factory=list)  # (line_no, reason), capped
    malformed_total: int = 0

    def add_malformed(self, line_no: int, reason: str):
        self.malformed_total += 1
        if len(self.malformed) < _REPORT_DETAIL_CAP:
            self.malformed.append((line_no, reason))


@dataclass
class MeterRecords:
    """Columnar record batch sorted by timestamp.

    ``user_index`` points into ``users``; ``ts_epoch`` is UTC epoch
    seconds. Iteration yields RawMeterRecord rows for convenience.
    """

    users: list[str]
    user_index: np.ndarray
    ts_epoch: np.ndarray
    energy_kwh: np.ndarray

    def __len__(self) -> int:
        return self.ts_epoch.shape[0]

    def __iter__(self) -> Iterator[RawMeterRecord]:
        for i in range(len(self)):
            yield RawMeterRecord(
                user_id=self.users[self.user_index[i]],
                timestamp=datetime.fromtimestamp(int(self.ts_epoch[i]), tz=timezone.utc),
                energy_kwh=float(self.energy_kwh[i]),
            )

    @classmethod
    def from_rows(cls, rows: list[RawMeterRecord]) -> "MeterRecords":
        users = sorted({r.user_id for r in rows})
        lookup = {u: i for i, u in enumerate(users)}
        idx = np.array([lookup[r.user_id] for r in rows], dtype=np.int64)
        ts = np.array(
            [int(r.timestamp.astimezone(timezone.utc).timestamp()) for r in rows],
            dtype=np.int64,
        )
        energy = np.array([r.energy_kwh for r in rows], dtype=np.float64)
        return cls(users=users, user_index=idx, ts_epoch=ts, energy_kwh=energy)._sorted()

    def _sorted(self) -> "MeterRecords":
        order = np.lexsort((self.user_index, self.ts_epoch))
        return MeterRecords(
            users=self.users,
            user_index=self.user_index[order],
            ts_epoch=self.ts_epoch[order],
            energy_kwh=self.energy_kwh[order],
        )


def _parse_timestamp(raw: str) -> int:
    """RFC 3339 string -> UTC epoch seconds; raises ValueError when unusable."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        raise ValueError("timestamp lacks a UTC offset")
    dt = dt.astimezone(timezone.utc)
    if dt.minute not in _VALID_MINUTES or dt.second != 0 or dt.microsecond != 0:
        raise ValueError("timestamp not aligned to a 15-minute boundary")
    return int(dt.timestamp())


def ingest_csv(path: Path | str) -> tuple[MeterRecords, IngestReport]:
    """Parse a raw meter CSV into timestamp-sorted columnar records."""
    path = Path(path)
    try:
        fh = path.open("r", encoding="utf-8", newline="")
    except OSError as exc:
        raise IngestError(f"cannot open {path}: {exc}") from exc

    report = IngestReport()
    users: list[str] = []
    user_lookup: dict[str, int] = {}
    ts_cache: dict[str, int] = {}
    user_idx: list[int] = []
    ts_list: list[int] = []
    energy_list: list[float] = []

    with fh:
        header = fh.readline().strip()
        if header != HEADER:
            raise IngestError(f"{path}: expected header {HEADER!r}, got {header!r}")
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            report.rows_total += 1
            parts = line.split(",")
            if len(parts) != 3:
                report.add_malformed(line_no, "expected 3 columns")
                continue
            uid, ts_raw, energy_raw = parts
            epoch = ts_cache.get(ts_raw)
            if epoch is None:
                try:
                    epoch = _parse_timestamp(ts_raw)
                except ValueError as exc:
                    report.add_malformed(line_no, f"bad timestamp: {exc}")
                    continue
                ts_cache[ts_raw] = epoch
            try:
                energy = float(energy_raw)
            except ValueError:
                report.add_malformed(line_no, "bad energy value")
                continue
            if not math.isfinite(energy):
                report.add_malformed(line_no, "non-finite energy")
                continue
            uidx = user_lookup.get(uid)
            if uidx is None:
                uidx = len(users)
                user_lookup[uid] = uidx
                users.append(uid)
            user_idx.append(uidx)
            ts_list.append(epoch)
            energy_list.append(energy)
            report.rows_ok += 1

    if report.rows_total and report.malformed_total / report.rows_total > MALFORMED_ABORT_FRACTION:
        raise IngestError(
            f"{path}: {report.malformed_total} of {report.rows_total} rows malformed "
            f"(>{MALFORMED_ABORT_FRACTION:.0%}); first: {report.malformed[:5]}"
        )

    records = MeterRecords(
        users=users,
        user_index=np.array(user_idx, dtype=np.int64),
        ts_epoch=np.array(ts_list, dtype=np.int64),
        energy_kwh=np.array(energy_list, dtype=np.float64),
    )._sorted()
    return records, report
