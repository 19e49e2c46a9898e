"""How ambient conditions move the thermal rating of a Zebra conductor.

Sweeps wind speed, wind attack angle, air temperature and solar radiation
one at a time around the benchmark's default sweep ambient, prints compact
rating tables, and reports the first-order sensitivity slopes.

Run:  python3 demos/thermal_sweeps.py
"""

import numpy as np

from dlrsim.scenario import SWEEP_GRIDS, load_benchmark, sweep
from dlrsim.thermal import sensitivity_fit

bench = load_benchmark()
conductor = bench.conductor
base = bench.sweep_ambient

print(f"conductor: Zebra, D = {conductor.diameter_m * 1e3:.2f} mm, "
      f"limit {conductor.t_max:.0f} degC")
print(f"base ambient: V = {base.wind_speed} m/s, delta = {base.wind_angle_deg} deg, "
      f"S = {base.solar_radiation} W/m2, Ta = {base.air_temp} degC\n")

for parameter in SWEEP_GRIDS:
    frame = sweep(conductor, parameter, base)
    values = frame[parameter].to_numpy()
    ratings = frame["ac_rating_a"].to_numpy()
    picks = np.linspace(0, len(values) - 1, 6).astype(int)
    print(f"--- {parameter} sweep "
          f"(end-to-end {frame.attrs['end_to_end_change_pct']:+.1f}%)")
    for i in picks:
        print(f"    {values[i]:8.1f}  ->  {ratings[i]:7.1f} A")
    print()

print("first-order sensitivities around the base ambient:")
for parameter, unit in (("wind_speed", "m/s"), ("air_temp", "degC"),
                        ("solar", "100 W/m2")):
    fit = sensitivity_fit(conductor, base, parameter)
    slope = fit.slope_pct_per_unit * (100.0 if parameter == "solar" else 1.0)
    print(f"    {parameter:12s} {slope:+7.3f} % per {unit}")
