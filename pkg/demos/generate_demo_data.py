"""Generate the bundled synthetic six-zone December dataset.

Writes wind/pv/load feed-in CSVs (15-minute) and daily min/max temperature
CSVs into ``src/dlrsim/data/demo/``.  The dataset is wind-heavy in the
northern zones A and E, with several multi-day storm events, so that the
scaled-up scenario (doubled RES, 80 % dispatchable capacity) congests the
north-to-south corridors.

Deterministic: fixed RNG seed, safe to re-run.
"""

from pathlib import Path

import numpy as np
import pandas as pd

OUT = Path(__file__).resolve().parent.parent / "src" / "dlrsim" / "data" / "demo"

ZONES = ["A", "B", "C", "D", "E", "F"]

# installed RES capacity per zone (MW): wind in the north, PV in the south
WIND_CAP = {"A": 12000, "B": 2500, "C": 1000, "D": 1500, "E": 10000, "F": 800}
PV_CAP = {"A": 1500, "B": 3000, "C": 5000, "D": 6000, "E": 3000, "F": 1500}

# mean zonal load (MW)
LOAD_BASE = {"A": 8000, "B": 13000, "C": 12000, "D": 10000, "E": 9000, "F": 6500}

# how strongly each zone follows the common storm systems
STORM_COUPLING = {"A": 1.0, "B": 0.55, "C": 0.4, "D": 0.4, "E": 0.9, "F": 0.5}

V_CUT, V_RATED = 1.0, 15.0
S_REF = 600.0  # W/m^2 mapped to full PV output

rng = np.random.default_rng(20231201)

index = pd.date_range("2023-12-01", "2023-12-29", freq="15min",
                      tz="UTC", inclusive="left")
n = len(index)
hours = index.hour + index.minute / 60.0
day_of_month = (index.dayofyear - index.dayofyear[0]).to_numpy()
t_days = np.arange(n) / 96.0


def smooth(x, width):
    kernel = np.ones(width) / width
    return np.convolve(x, kernel, mode="same")


# --- wind: shared storm signal plus zonal colour -------------------------
storm = (
    0.45
    + 0.35 * np.sin(2 * np.pi * t_days / 9.0 + 0.3)
    + 0.25 * np.sin(2 * np.pi * t_days / 3.7 + 1.9)
    + smooth(rng.normal(0, 0.55, n), 192)
)
storm = np.clip(storm, 0.0, 1.3)

wind = {}
for z in ZONES:
    local = smooth(rng.normal(0, 0.9, n), 48)
    v = V_CUT + (V_RATED - V_CUT) * np.clip(
        0.12 + STORM_COUPLING[z] * storm + 0.12 * local, 0.0, 1.0
    )
    frac = ((v - V_CUT) / (V_RATED - V_CUT)) ** 3
    wind[z] = WIND_CAP[z] * frac

# --- pv: december clear-sky bell with daily cloudiness -------------------
daylight = np.where((hours >= 8.0) & (hours <= 16.0),
                    np.sin(np.pi * (hours - 8.0) / 8.0) ** 2, 0.0)
cloud_by_day = np.clip(rng.uniform(0.15, 1.0, 31), 0, 1)
pv = {}
for z in ZONES:
    jitter = np.clip(1.0 + smooth(rng.normal(0, 0.2, n), 16), 0.3, 1.3)
    s = 320.0 * daylight * cloud_by_day[day_of_month] * jitter
    pv[z] = PV_CAP[z] * np.minimum(s / S_REF, 1.0)

# --- load: double-peaked winter day, weekend dip -------------------------
profile = (
    0.78
    + 0.22 * np.exp(-((hours - 11.0) / 3.2) ** 2)
    + 0.30 * np.exp(-((hours - 18.0) / 2.2) ** 2)
)
weekday = np.where(index.dayofweek < 5, 1.0, 0.88)
load = {}
for z in ZONES:
    noise = 1.0 + smooth(rng.normal(0, 0.08, n), 24)
    load[z] = LOAD_BASE[z] * profile * weekday * noise

# --- daily temperatures: cool december, colder when stormy ---------------
days = pd.date_range(index[0].normalize(), periods=29, freq="D", tz="UTC")
storm_daily = storm.reshape(-1, 96).mean(axis=1)
storm_daily = np.append(storm_daily, storm_daily[-1])
tmin, tmax = {}, {}
for z in ZONES:
    base = rng.normal(3.0, 1.5) - 3.0 * storm_daily + smooth(rng.normal(0, 2.0, 29), 5)
    spread = np.clip(rng.normal(5.0, 1.0, 29), 2.5, 8.0)
    tmin[z] = np.round(base, 1)
    tmax[z] = np.round(base + spread, 1)


def write(name, idx, columns):
    frame = pd.DataFrame({"timestamp": [t.isoformat() for t in idx]})
    for z in ZONES:
        frame[z] = np.round(columns[z], 3)
    frame.to_csv(OUT / name, index=False)
    print(f"wrote {OUT / name} ({len(frame)} rows)")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    write("wind.csv", index, wind)
    write("pv.csv", index, pv)
    write("load.csv", index, load)
    write("tmin.csv", days, tmin)
    write("tmax.csv", days, tmax)
