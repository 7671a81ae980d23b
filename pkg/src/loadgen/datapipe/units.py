"""Unit conversions for 15-minute meter data."""

from __future__ import annotations

import numpy as np

# Interval energy to average power: 4 intervals per hour.
INTERVALS_PER_HOUR = 4.0

# Training domain: power divided by 100 kW.
SCALE_KW = 100.0


def energy_to_power(energy_kwh):
    """kWh over a 15-minute interval -> average kW (sign preserved)."""
    return np.multiply(energy_kwh, INTERVALS_PER_HOUR)


def scale_power(power_kw):
    """kW -> unit-scaled training values."""
    return np.divide(power_kw, SCALE_KW)


def unscale_power(scaled):
    """Unit-scaled training values -> kW."""
    return np.multiply(scaled, SCALE_KW)
