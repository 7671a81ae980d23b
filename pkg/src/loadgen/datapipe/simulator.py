"""Deterministic synthetic smart-meter data in the raw ingest format.

Users are drawn from four archetypes: flat baseload, daytime-peaking
commercial, solar-PV exporters (negative midday power), and spiky
intermittent industrial. Daily shapes are defined in local wall time,
modulated by a smooth seasonal factor, perturbed with multiplicative
noise, quantized to integer kWh per 15-minute interval, and written
against UTC timestamps.

Two seasonal modes exist: "sinusoidal" (winter-peaking consumption,
summer-peaking solar) and "linear" (consumption rises monotonically
from January to December), the latter giving a clean month trend for
interpolation experiments.
"""

from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

from loadgen.datapipe.clock import local_epochs
from loadgen.datapipe.records import HEADER

ARCHETYPES = ("flat", "commercial", "solar", "spiky")
_ARCHETYPE_P = (0.25, 0.35, 0.25, 0.15)
_AMPLITUDE_RANGE_KW = (8.0, 130.0)
# Archetypes below these connection sizes are implausible (rooftop PV or
# industrial spikes on a tiny connection) and are redrawn as flat/commercial.
_MIN_AMPLITUDE_KW = {"solar": 15.0, "spiky": 12.0}
_STANDBY_KW = 1.0


class SimulatorConfig(BaseModel):
    n_users: int = Field(default=300, ge=2)
    weeks: int = Field(default=52, ge=1)
    year: int = Field(default=2020, ge=1996, le=2100)
    trend: Literal["sinusoidal", "linear"] = "sinusoidal"
    seed: int = 0


def _seasonal_factor(months: np.ndarray, trend: str) -> np.ndarray:
    if trend == "linear":
        return 1.0 + 0.5 * (months - 6.5) / 5.5
    return 1.0 + 0.35 * np.cos(2.0 * np.pi * (months - 1) / 12.0)


def _solar_season(months: np.ndarray) -> np.ndarray:
    return 0.35 + 0.65 * (1.0 + np.cos(2.0 * np.pi * (months - 7) / 12.0)) / 2.0


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


class _SlotGrid:
    """Per-slot local-time features shared by all users."""

    def __init__(self, config: SimulatorConfig):
        start = int(datetime(config.year, 1, 1, tzinfo=timezone.utc).timestamp())
        n_slots = config.weeks * 7 * 96
        self.utc_epoch = start + 900 * np.arange(n_slots, dtype=np.int64)
        local = local_epochs(self.utc_epoch)
        day_int = local // 86400
        self.hour = (local % 86400) / 3600.0
        self.weekend = (day_int + 3) % 7 >= 5
        self.day_index = day_int - day_int.min()
        self.n_days = int(self.day_index.max()) + 1
        months = day_int.astype("datetime64[D]").astype("datetime64[M]").astype(np.int64) % 12 + 1
        self.months = months
        self.seasonal = _seasonal_factor(months.astype(np.float64), config.trend)
        self.solar_season = _solar_season(months.astype(np.float64))
        # Day length varies over the year; solar output follows a sine arc.
        day_len = 8.0 + 8.0 * (1.0 + np.cos(2.0 * np.pi * (months - 7) / 12.0)) / 2.0
        rise = 12.0 - day_len / 2.0
        frac = np.clip((self.hour - rise) / day_len, 0.0, 1.0)
        self.solar_bell = np.sin(np.pi * frac) ** 2
        self.timestamps = [
            datetime.fromtimestamp(int(e), tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
            for e in self.utc_epoch
        ]


def _user_power_kw(archetype: str, amplitude: float, grid: _SlotGrid,
                   rng: np.random.Generator) -> np.ndarray:
    h = grid.hour
    season = grid.seasonal
    if archetype == "flat":
        level = rng.uniform(0.5, 1.0) * amplitude
        base = level + 0.1 * amplitude * np.sin(2.0 * np.pi * (h - 4.0) / 24.0)
        power = (base + _STANDBY_KW) * season
        noise_sigma = 0.05
    elif archetype == "commercial":
        night = rng.uniform(0.15, 0.5) * amplitude
        plateau = _sigmoid((h - 8.0) / 0.75) * _sigmoid((18.0 - h) / 0.75)
        weekday_factor = np.where(grid.weekend, 0.35, 1.0)
        power = (night + 0.8 * amplitude * plateau * weekday_factor + _STANDBY_KW) * season
        noise_sigma = 0.08
    elif archetype == "solar":
        consumption = (rng.uniform(0.25, 0.5) * amplitude + _STANDBY_KW) * season
        cloud = rng.uniform(0.7, 1.0, size=grid.n_days)[grid.day_index]
        export = 1.6 * amplitude * grid.solar_bell * grid.solar_season * cloud
        power = consumption - export
        noise_sigma = 0.06
    else:  # spiky
        spikes = np.zeros(grid.hour.shape[0])
        for day in range(grid.n_days):
            for _ in range(rng.poisson(1.0)):
                start = rng.integers(0, 96)
                width = int(rng.integers(4, 14))
                level = rng.uniform(0.6, 1.3) * amplitude
                lo = day * 96 + start
                spikes[lo:lo + width] = np.maximum(spikes[lo:lo + width], level)
        power = (rng.uniform(0.1, 0.3) * amplitude + _STANDBY_KW + spikes) * season
        noise_sigma = 0.15
    return power * np.exp(noise_sigma * rng.standard_normal(power.shape[0]))


def simulate_dataset(config: SimulatorConfig, path: Path | str) -> dict:
    """Write a raw meter CSV; returns row/user counts and per-archetype tallies."""
    grid = _SlotGrid(config)
    root = np.random.SeedSequence(config.seed)
    children = root.spawn(config.n_users)
    width = len(str(max(config.n_users - 1, 1)))
    tallies = {name: 0 for name in ARCHETYPES}
    rows = 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(HEADER + "\n")
        for i, child in enumerate(children):
            rng = np.random.default_rng(child)
            lo, hi = _AMPLITUDE_RANGE_KW
            amplitude = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
            weights = np.array([
                0.0 if amplitude < _MIN_AMPLITUDE_KW.get(name, 0.0) else p
                for name, p in zip(ARCHETYPES, _ARCHETYPE_P)
            ])
            weights /= weights.sum()
            archetype = ARCHETYPES[rng.choice(len(ARCHETYPES), p=weights)]
            tallies[archetype] += 1
            power = _user_power_kw(archetype, amplitude, grid, rng)
            energy = np.rint(power / 4.0).astype(np.int64)
            uid = f"user{i:0{width}d}"
            fh.writelines(
                f"{uid},{ts},{e}\n" for ts, e in zip(grid.timestamps, energy)
            )
            rows += energy.shape[0]
    return {"rows": rows, "users": config.n_users, "archetypes": tallies}
