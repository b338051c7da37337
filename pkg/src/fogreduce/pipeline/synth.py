"""Deterministic synthetic field data standing in for a real farm deployment."""

from __future__ import annotations

import calendar
import enum
import math

import numpy as np

from ..errors import InvalidParameters
from ..types import SECONDS_PER_DAY, TimeSeries

DEFAULT_START = calendar.timegm((2019, 6, 1, 0, 0, 0))


class Profile(enum.Enum):
    SOIL_TEMPERATURE = "soil_temperature"
    SOLAR_RADIATION = "solar_radiation"

    @classmethod
    def parse(cls, text) -> "Profile":
        if isinstance(text, cls):
            return text
        key = str(text).replace("-", "_").lower()
        aliases = {"soiltemperature": cls.SOIL_TEMPERATURE, "solarradiation": cls.SOLAR_RADIATION}
        try:
            return cls(key)
        except ValueError:
            if key.replace("_", "") in aliases:
                return aliases[key.replace("_", "")]
        raise InvalidParameters(f"unknown profile {text!r}")


UNITS = {Profile.SOIL_TEMPERATURE: "degC", Profile.SOLAR_RADIATION: "W/m2"}
_STREAM = {Profile.SOIL_TEMPERATURE: 0, Profile.SOLAR_RADIATION: 1}


def _soil(tod, rng, amplitude=4.0, offset=18.0, noise_std=0.05, peak_hour=15.0):
    if noise_std < 0:
        raise InvalidParameters("noise_std must be non-negative")
    phase = 2.0 * math.pi * (tod - peak_hour * 3600.0) / SECONDS_PER_DAY
    noise = rng.normal(0.0, noise_std, tod.size) if noise_std > 0 else np.zeros(tod.size)
    return offset + amplitude * np.cos(phase) + noise


def _solar(
    tod,
    day,
    rng,
    peak=850.0,
    sunrise_hour=6.0,
    sunset_hour=20.0,
    dropout_prob=0.15,
    clearness=(0.55, 1.0),
):
    if not 0 <= dropout_prob <= 1:
        raise InvalidParameters("dropout_prob must lie in [0, 1]")
    if not 0 <= sunrise_hour < sunset_hour <= 24:
        raise InvalidParameters("need 0 <= sunrise_hour < sunset_hour <= 24")
    n_days = int(day.max()) + 1 if day.size else 0
    clear = rng.uniform(clearness[0], clearness[1], n_days)
    drop = rng.random(tod.size) < dropout_prob
    drop_factor = rng.uniform(0.15, 0.6, tod.size)
    rise, set_ = sunrise_hour * 3600.0, sunset_hour * 3600.0
    daylight = (tod > rise) & (tod < set_)
    bump = np.zeros(tod.size)
    bump[daylight] = np.sin(math.pi * (tod[daylight] - rise) / (set_ - rise))
    value = peak * clear[day] * np.clip(bump, 0.0, None)
    value = np.where(drop, value * drop_factor, value)
    value[~daylight] = 0.0
    return value


def generate_synthetic(
    days: int,
    cadence_minutes: int,
    profile: Profile | str,
    seed: int,
    start: int = DEFAULT_START,
    **params,
) -> TimeSeries:
    """
    Generate ``days`` of one profile at a fixed cadence starting at ``start`` (UTC seconds).

    Soil temperature is a daily sinusoid plus Gaussian noise (``amplitude``,
    ``offset``, ``noise_std``, ``peak_hour``). Solar radiation is a clipped
    half-sine between sunrise and sunset, scaled by a per-day clearness factor
    and randomly attenuated by passing clouds (``peak``, ``sunrise_hour``,
    ``sunset_hour``, ``dropout_prob``); it is exactly zero at night.

    The same arguments always give bit-identical output.
    """
    profile = Profile.parse(profile)
    if days < 1:
        raise InvalidParameters("days must be >= 1")
    if cadence_minutes < 1:
        raise InvalidParameters("cadence_minutes must be >= 1")
    step = cadence_minutes * 60
    count = (days * SECONDS_PER_DAY) // step
    ts = start + step * np.arange(count, dtype=np.int64)
    rel = ts - (start - start % SECONDS_PER_DAY)
    tod = (rel % SECONDS_PER_DAY).astype(np.float64)
    day = (rel // SECONDS_PER_DAY).astype(np.int64)
    rng = np.random.default_rng([int(seed), _STREAM[profile]])
    try:
        if profile is Profile.SOIL_TEMPERATURE:
            values = _soil(tod, rng, **params)
        else:
            values = _solar(tod, day, rng, **params)
    except TypeError as exc:
        raise InvalidParameters(str(exc)) from exc
    return TimeSeries(profile.value, ts, values, UNITS[profile], "synthetic")
