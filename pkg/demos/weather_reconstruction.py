"""Recovering zonal weather from feed-in and daily temperature records.

Takes one December day of the bundled synthetic dataset for the wind-heavy
zone A, reconstructs wind speed, solar radiation and air temperature, and
prints an hourly profile next to the driving feed-ins.

Run:  python3 demos/weather_reconstruction.py
"""

import datetime as dt

import numpy as np
import pandas as pd

from dlrsim.scenario import builtin_path, load_benchmark, load_csv
from dlrsim.weather import (DailyTempRecord, FeedInSeries, SolarCalibration,
                            calibrate_wind, reconstruct_zone)

ZONE = "A"
DAY = "2023-12-03"

bench = load_benchmark()
zones = bench.zone_ids
wind = load_csv(builtin_path("demo/wind.csv"), zones)
pv = load_csv(builtin_path("demo/pv.csv"), zones)
load = load_csv(builtin_path("demo/load.csv"), zones)
tmin = load_csv(builtin_path("demo/tmin.csv"), zones, step_seconds=86400.0)
tmax = load_csv(builtin_path("demo/tmax.csv"), zones, step_seconds=86400.0)

wind_cal = calibrate_wind(wind.values[ZONE].to_numpy())
pv_all = pv.values[ZONE].to_numpy()
zone_cfg = next(z for z in bench.zones if z.id == ZONE)
solar_cal = SolarCalibration(s_mean=zone_cfg.s_mean_wm2,
                             p_pv_mean=pv_all[pv_all > 0].mean())
records = {
    ts.date(): DailyTempRecord(ts.date(),
                               float(tmin.values[ZONE].iloc[i]),
                               float(tmax.values[ZONE].iloc[i]))
    for i, ts in enumerate(tmin.index)
}

start = pd.Timestamp(DAY, tz="UTC")
table = wind.slice(start, start + pd.Timedelta(days=1))
mask = (wind.index >= start) & (wind.index < start + pd.Timedelta(days=1))
series = FeedInSeries(
    zone=ZONE, index=wind.index[mask],
    wind=wind.values[ZONE].to_numpy()[mask],
    pv=pv.values[ZONE].to_numpy()[mask],
    load=load.values[ZONE].to_numpy()[mask],
)
ambients = reconstruct_zone(series, records, wind_cal, solar_cal,
                            wind_angle_deg=bench.wind_angle_deg,
                            local_offset_hours=bench.local_time_offset_hours)

print(f"zone {ZONE}, {DAY} (UTC), power-curve constant "
      f"c_w = {wind_cal.c_w:.3f} MW/(m/s)^3\n")
print("hour   wind MW  ->  m/s    pv MW  ->  W/m2    air degC")
for i in range(0, len(ambients), 4):
    a = ambients[i]
    print(f"{series.index[i]:%H:%M}  {series.wind[i]:8.0f}  {a.wind_speed:6.2f}"
          f"  {series.pv[i]:7.0f}  {a.solar_radiation:7.1f}    {a.air_temp:6.1f}")

speeds = np.array([a.wind_speed for a in ambients])
temps = np.array([a.air_temp for a in ambients])
print(f"\nwind speed range {speeds.min():.2f}..{speeds.max():.2f} m/s "
      f"(bounded by cut-in 1 and rated 15)")
print(f"air temperature range {temps.min():.1f}..{temps.max():.1f} degC "
      f"(bounded by the day's min/max record)")
