"""Reconstruction of ambient conditions from RES feed-in and temperature records.

Wind speed is recovered from zonal wind feed-in through the cubic region of
the turbine power curve, solar radiation from PV feed-in by linear scaling,
and air temperature from daily min/max records with a piecewise half-cosine
day profile whose valley and peak hours depend on the season.
"""

from __future__ import annotations

import datetime as dt
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .thermal import AmbientConditions

log = logging.getLogger(__name__)

RATED_WIND_SPEED = 15.0  # m/s
CUT_IN_WIND_SPEED = 1.0  # m/s

# (valley_hour, peak_hour) of the daily temperature profile, local time
SEASON_HOURS = {
    "winter": (8.0, 14.0),
    "spring": (6.0, 16.0),
    "summer": (4.0, 18.0),
    "autumn": (6.0, 16.0),
}

_SEASON_BY_MONTH = {
    12: "winter", 1: "winter", 2: "winter",
    3: "spring", 4: "spring", 5: "spring",
    6: "summer", 7: "summer", 8: "summer",
    9: "autumn", 10: "autumn", 11: "autumn",
}


class AllZeroSeries(ValueError):
    """Feed-in series carries no energy, calibration impossible."""


class HorizonMismatch(ValueError):
    """Input series do not cover the same time horizon."""


def season_of(date: dt.date) -> str:
    """Meteorological season of a calendar date."""
    return _SEASON_BY_MONTH[date.month]


@dataclass(frozen=True)
class FeedInSeries:
    """Per-zone feed-in and load series on a uniform time grid."""

    zone: str
    index: pd.DatetimeIndex
    wind: np.ndarray   # MW
    pv: np.ndarray     # MW
    load: np.ndarray   # MW
    step_seconds: float = 900.0

    def __post_init__(self):
        n = len(self.index)
        if not (len(self.wind) == len(self.pv) == len(self.load) == n):
            raise HorizonMismatch(
                f"zone {self.zone}: series lengths differ from index length {n}"
            )
        for name, arr in (("wind", self.wind), ("pv", self.pv), ("load", self.load)):
            if np.any(np.asarray(arr) < 0):
                raise ValueError(f"zone {self.zone}: negative values in {name} series")


@dataclass(frozen=True)
class DailyTempRecord:
    """Daily minimum and maximum air temperature at one zone."""

    date: dt.date
    t_min: float
    t_max: float

    def __post_init__(self):
        if self.t_min > self.t_max:
            raise ValueError(f"{self.date}: t_min {self.t_min} > t_max {self.t_max}")

    @property
    def season(self) -> str:
        return season_of(self.date)


@dataclass(frozen=True)
class WindCalibration:
    """Cubic power-curve calibration mapping feed-in back to wind speed."""

    c_w: float  # MW/(m/s)^3
    v_rated: float = RATED_WIND_SPEED
    v_cut: float = CUT_IN_WIND_SPEED

    def __post_init__(self):
        if not self.v_rated > self.v_cut >= 0:
            raise ValueError("require v_rated > v_cut >= 0")
        if self.c_w <= 0:
            raise ValueError("c_w must be positive")

    @property
    def p_max(self) -> float:
        """Feed-in level mapped to the rated wind speed (MW)."""
        return self.c_w * (self.v_rated - self.v_cut) ** 3


@dataclass(frozen=True)
class SolarCalibration:
    """Linear scaling between PV feed-in and global radiation."""

    s_mean: float     # W/m^2, regional annual mean radiation
    p_pv_mean: float  # MW, mean PV feed-in

    def __post_init__(self):
        if self.s_mean <= 0 or self.p_pv_mean <= 0:
            raise ValueError("s_mean and p_pv_mean must be positive")


def calibrate_wind(series, v_rated=RATED_WIND_SPEED, v_cut=CUT_IN_WIND_SPEED):
    """Derive the power-curve constant from the annual feed-in maximum."""
    values = np.asarray(series.wind if isinstance(series, FeedInSeries) else series,
                        dtype=float)
    if values.size == 0 or values.max() <= 0:
        raise AllZeroSeries("wind feed-in series is empty or all zero")
    c_w = values.max() / (v_rated - v_cut) ** 3
    return WindCalibration(c_w=c_w, v_rated=v_rated, v_cut=v_cut)


def wind_speed(p_w, cal: WindCalibration):
    """Wind speed (m/s) for wind feed-in ``p_w`` (MW); accepts arrays.

    Feed-in above the calibration maximum (possible after scenario scaling)
    clamps to the rated speed.
    """
    p = np.asarray(p_w, dtype=float)
    if np.any(p < 0):
        raise ValueError("wind feed-in must be >= 0")
    over = p > cal.p_max
    if np.any(over):
        log.warning("clamping %d wind feed-in values above calibration maximum",
                    int(np.count_nonzero(over)))
        p = np.minimum(p, cal.p_max)
    v = np.cbrt(p / cal.c_w) + cal.v_cut
    return float(v) if np.isscalar(p_w) else v


def solar_radiation(p_pv, cal: SolarCalibration):
    """Global solar radiation (W/m^2) for PV feed-in ``p_pv`` (MW)."""
    p = np.asarray(p_pv, dtype=float)
    if np.any(p < 0):
        raise ValueError("PV feed-in must be >= 0")
    s = cal.s_mean / cal.p_pv_mean * p
    return float(s) if np.isscalar(p_pv) else s


def _day_profile(hour: float, valley: float, peak: float) -> float:
    """Normalized daily temperature shape in [0, 1] at local ``hour``.

    Half-cosine segments anchored at the valley and peak hours: 0 at the
    valley, 1 at the peak, falling towards the next day's valley after the
    peak and rising from the previous day's peak before the valley.
    """
    if hour < valley:
        # descending branch that started at yesterday's peak
        span = valley - (peak - 24.0)
        phase = (hour - (peak - 24.0)) / span
        return 0.5 + 0.5 * math.cos(math.pi * phase)
    if hour <= peak:
        phase = (hour - valley) / (peak - valley)
        return 0.5 - 0.5 * math.cos(math.pi * phase)
    # after the peak, descending towards tomorrow's valley
    span = (valley + 24.0) - peak
    phase = (hour - peak) / span
    return 0.5 + 0.5 * math.cos(math.pi * phase)


def air_temperature(record: DailyTempRecord, hour: float, season=None) -> float:
    """Air temperature (degC) at local time ``hour`` within the record's day."""
    if not 0.0 <= hour < 24.0:
        raise ValueError("hour must be in [0, 24)")
    valley, peak = SEASON_HOURS[season or record.season]
    gamma = _day_profile(hour, valley, peak)
    return record.t_min + (record.t_max - record.t_min) * gamma


def reconstruct_zone(
    series: FeedInSeries,
    records: dict,
    wind_cal: WindCalibration,
    solar_cal: SolarCalibration,
    wind_angle_deg: float = 45.0,
    local_offset_hours: float = 1.0,
):
    """Reconstruct the per-step ambient condition series for one zone.

    ``records`` maps each calendar date (local time) covered by the series to
    its :class:`DailyTempRecord`.  Returns a list of
    :class:`~dlrsim.thermal.AmbientConditions`, one per step.
    """
    speeds = wind_speed(series.wind, wind_cal)
    radiation = solar_radiation(series.pv, solar_cal)
    out = []
    offset = dt.timedelta(hours=local_offset_hours)
    for i, ts in enumerate(series.index):
        local = ts.to_pydatetime() + offset
        record = records.get(local.date())
        if record is None:
            raise HorizonMismatch(
                f"zone {series.zone}: no temperature record for {local.date()}"
            )
        hour = local.hour + local.minute / 60.0 + local.second / 3600.0
        out.append(AmbientConditions(
            wind_speed=float(speeds[i]),
            wind_angle_deg=wind_angle_deg,
            solar_radiation=float(radiation[i]),
            air_temp=air_temperature(record, hour),
        ))
    return out
