"""Scenario handling: data ingestion, benchmark config, pipeline runs.

Ties the other modules together: reads the benchmark definition and the CSV
time series, reconstructs zonal ambient conditions, builds the rating
series (NLR or DLR), runs the receding-horizon dispatch and writes the
result bundle (curtailment table, per-line rating and flow series, and a
run manifest).
"""

from __future__ import annotations

import dataclasses
import datetime as dt
import importlib.resources
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
import yaml

from . import __version__
from .dispatch import (DispatchProblem, DispatchWeights, PowerNodeFleet,
                       StorageParams, curtailment_report, receding_horizon_run)
from .grid import (GridModel, Line, build_ptdf, calibrate_to_nlr, rating_series)
from .thermal import (AmbientConditions, ConductorSpec, SENSITIVITY_DOMAINS,
                      ac_line_rating, _with_parameter)
from .weather import (DailyTempRecord, FeedInSeries, SolarCalibration,
                      calibrate_wind, reconstruct_zone)

log = logging.getLogger(__name__)

STEP_SECONDS = 900.0
DAY_SECONDS = 86400.0


class SchemaError(ValueError):
    """CSV is missing required columns."""


class GapError(ValueError):
    """CSV time axis is not a uniform grid."""


class ParseError(ValueError):
    """CSV cell could not be parsed."""


class UnknownParameter(ValueError):
    """Sweep parameter is not one of the supported ambient quantities."""


@dataclass(frozen=True)
class TimeSeriesTable:
    """Validated zone-columned time series on a uniform step."""

    index: pd.DatetimeIndex
    values: pd.DataFrame  # columns = zones
    step_seconds: float

    def slice(self, start, end):
        """Half-open [start, end) time slice."""
        mask = (self.index >= start) & (self.index < end)
        return TimeSeriesTable(self.index[mask], self.values.loc[mask],
                               self.step_seconds)


def load_csv(path, expected_zones, step_seconds=STEP_SECONDS) -> TimeSeriesTable:
    """Read and validate a ``timestamp,zoneA,...`` CSV.

    Raises :class:`SchemaError` for missing zone columns, :class:`GapError`
    for a non-uniform time axis and :class:`ParseError` for unparseable
    cells (with the offending line number).
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if "timestamp" not in frame.columns:
        raise SchemaError(f"{path}: missing 'timestamp' column")
    missing = [z for z in expected_zones if z not in frame.columns]
    if missing:
        raise SchemaError(f"{path}: missing zone columns {missing}")
    try:
        index = pd.DatetimeIndex(pd.to_datetime(frame["timestamp"], utc=True))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: bad timestamp: {exc}") from exc
    if len(index) == 0:
        raise SchemaError(f"{path}: empty table")
    if not index.is_monotonic_increasing or index.has_duplicates:
        raise GapError(f"{path}: timestamps not strictly increasing")
    if len(index) > 1:
        deltas = np.diff(index.view("int64")) / 1e9
        bad = np.nonzero(deltas != step_seconds)[0]
        if bad.size:
            raise GapError(
                f"{path}: non-uniform step after {index[bad[0]]} "
                f"(expected {step_seconds} s, got {deltas[bad[0]]} s)"
            )
    values = frame[list(expected_zones)]
    for col in values.columns:
        numeric = pd.to_numeric(values[col], errors="coerce")
        nan_rows = numeric.index[numeric.isna()]
        if len(nan_rows):
            # +2: header line plus 1-based indexing
            raise ParseError(
                f"{path}: non-numeric value in column {col!r} at line {nan_rows[0] + 2}"
            )
    return TimeSeriesTable(index=index,
                           values=values.astype(float).reset_index(drop=True),
                           step_seconds=step_seconds)


@dataclass(frozen=True)
class ZoneConfig:
    id: str
    name: str
    s_mean_wm2: float
    disp_cap_mw: float
    storage: StorageParams


@dataclass(frozen=True)
class Benchmark:
    """Parsed benchmark definition (grid, conductor, ambient references)."""

    name: str
    zones: tuple                 # ZoneConfig
    grid: GridModel
    conductor: ConductorSpec
    reference_ambient: AmbientConditions    # NLR calibration condition
    sweep_ambient: AmbientConditions        # default base for rating sweeps
    wind_angle_deg: float
    local_time_offset_hours: float
    slack: str
    weights: DispatchWeights
    horizon_steps: int

    @property
    def zone_ids(self):
        return tuple(z.id for z in self.zones)


def _ambient_from_dict(d) -> AmbientConditions:
    return AmbientConditions(
        wind_speed=float(d["wind_speed"]),
        wind_angle_deg=float(d["wind_angle_deg"]),
        solar_radiation=float(d["solar_radiation"]),
        air_temp=float(d["air_temp"]),
    )


def builtin_path(name) -> Path:
    """Path of a data file shipped with the package."""
    return Path(importlib.resources.files("dlrsim") / "data" / name)


def load_benchmark(path=None) -> Benchmark:
    """Load a benchmark YAML; defaults to the shipped six-zone benchmark."""
    path = Path(path) if path else builtin_path("benchmark.yaml")
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    zones = tuple(
        ZoneConfig(
            id=z["id"], name=z.get("name", z["id"]),
            s_mean_wm2=float(z["s_mean_wm2"]),
            disp_cap_mw=float(z["disp_cap_mw"]),
            storage=StorageParams(**z.get("storage", {})),
        )
        for z in raw["zones"]
    )
    lines = tuple(
        Line(
            from_node=l["from"], to_node=l["to"],
            circuits_220=int(l.get("circuits_220", 0)),
            circuits_380=int(l.get("circuits_380", 0)),
            susceptance=float(l["susceptance"]),
            nlr_mva=float(l["nlr_mva"]),
        )
        for l in raw["lines"]
    )
    grid = GridModel(nodes=tuple(z.id for z in zones), lines=lines,
                     base_mva=float(raw.get("base_mva", 100.0)))
    conductor = ConductorSpec(**raw["conductor"])
    weights = DispatchWeights(**raw.get("dispatch", {}).get("weights", {}))
    return Benchmark(
        name=raw.get("name", path.stem),
        zones=zones,
        grid=grid,
        conductor=conductor,
        reference_ambient=_ambient_from_dict(raw["reference_ambient"]),
        sweep_ambient=_ambient_from_dict(raw["sweep_ambient"]),
        wind_angle_deg=float(raw.get("wind_angle_deg", 45.0)),
        local_time_offset_hours=float(raw.get("local_time_offset_hours", 1.0)),
        slack=raw.get("slack", zones[0].id),
        weights=weights,
        horizon_steps=int(raw.get("dispatch", {}).get("horizon_steps", 256)),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """A complete simulation request."""

    benchmark_path: object      # None = shipped benchmark
    data_paths: dict            # wind/pv/load/tmin/tmax -> csv path
    start: pd.Timestamp
    end: pd.Timestamp
    rating_mode: str = "DLR"
    res_scale: float = 1.0
    disp_scale: float = 1.0
    horizon_steps: int = None   # None = benchmark default
    weight_overrides: dict = field(default_factory=dict)
    output_dir: object = "out"

    def __post_init__(self):
        if self.rating_mode not in ("NLR", "DLR"):
            raise ValueError("rating_mode must be 'NLR' or 'DLR'")
        if self.res_scale <= 0 or self.disp_scale <= 0:
            raise ValueError("scale factors must be positive")
        if self.end <= self.start:
            raise ValueError("empty simulation span")


def load_scenario(path) -> ScenarioConfig:
    """Parse a scenario YAML file."""
    path = Path(path)
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    base = path.parent
    data = {}
    for key in ("wind", "pv", "load", "tmin", "tmax"):
        p = Path(raw["data"][key])
        data[key] = p if p.is_absolute() else base / p
    bench = raw.get("benchmark")
    if bench and bench != "builtin":
        bench = Path(bench) if Path(bench).is_absolute() else base / bench
    else:
        bench = None
    return ScenarioConfig(
        benchmark_path=bench,
        data_paths=data,
        start=pd.Timestamp(raw["span"]["start"], tz="UTC"),
        end=pd.Timestamp(raw["span"]["end"], tz="UTC"),
        rating_mode=raw.get("rating_mode", "DLR"),
        res_scale=float(raw.get("res_scale", 1.0)),
        disp_scale=float(raw.get("disp_scale", 1.0)),
        horizon_steps=raw.get("horizon_steps"),
        weight_overrides=raw.get("weights", {}) or {},
        output_dir=raw.get("output_dir", "out"),
    )


def apply_scaling(fleet: PowerNodeFleet, res_scale, disp_scale) -> PowerNodeFleet:
    """Scale RES feed-ins and dispatchable capacities; everything else fixed."""
    return dataclasses.replace(
        fleet,
        wind=fleet.wind * res_scale,
        pv=fleet.pv * res_scale,
        disp_cap=fleet.disp_cap * disp_scale,
    )


def _temp_records(tmin: TimeSeriesTable, tmax: TimeSeriesTable, zone):
    records = {}
    for i, ts in enumerate(tmin.index):
        date = ts.date()
        records[date] = DailyTempRecord(
            date=date,
            t_min=float(tmin.values[zone].iloc[i]),
            t_max=float(tmax.values[zone].iloc[i]),
        )
    return records


@dataclass
class PreparedScenario:
    """All intermediate artifacts of a pipeline run, before dispatch."""

    config: ScenarioConfig
    benchmark: Benchmark
    fleet: PowerNodeFleet
    index: pd.DatetimeIndex
    ambients_by_zone: dict
    calibration: dict
    ratings: object


def prepare(config: ScenarioConfig) -> PreparedScenario:
    """Run the weather -> thermal -> grid stages of the pipeline."""
    benchmark = load_benchmark(config.benchmark_path)
    zones = benchmark.zone_ids
    try:
        wind = load_csv(config.data_paths["wind"], zones)
        pv = load_csv(config.data_paths["pv"], zones)
        load = load_csv(config.data_paths["load"], zones)
        tmin = load_csv(config.data_paths["tmin"], zones, step_seconds=DAY_SECONDS)
        tmax = load_csv(config.data_paths["tmax"], zones, step_seconds=DAY_SECONDS)
    except (SchemaError, GapError, ParseError) as exc:
        raise type(exc)(f"[ingestion] {exc}") from exc

    span = slice(None)
    w = wind.slice(config.start, config.end)
    p = pv.slice(config.start, config.end)
    d = load.slice(config.start, config.end)
    if not (len(w.index) == len(p.index) == len(d.index)) or len(w.index) == 0:
        raise SchemaError("[ingestion] wind/pv/load series do not cover the span")

    # ambient reconstruction uses the unscaled feed-ins: scenario scaling
    # multiplies fleet sizes, not the underlying weather
    ambients = {}
    for zc in benchmark.zones:
        zone = zc.id
        series = FeedInSeries(
            zone=zone, index=w.index,
            wind=w.values[zone].to_numpy(),
            pv=p.values[zone].to_numpy(),
            load=d.values[zone].to_numpy(),
        )
        # calibrate on the full record so the annual maximum maps to rated speed
        wind_cal = calibrate_wind(wind.values[zone].to_numpy())
        pv_all = pv.values[zone].to_numpy()
        pv_mean = pv_all[pv_all > 0].mean() if np.any(pv_all > 0) else 1.0
        solar_cal = SolarCalibration(s_mean=zc.s_mean_wm2, p_pv_mean=pv_mean)
        records = _temp_records(tmin, tmax, zone)
        ambients[zone] = reconstruct_zone(
            series, records, wind_cal, solar_cal,
            wind_angle_deg=benchmark.wind_angle_deg,
            local_offset_hours=benchmark.local_time_offset_hours,
        )

    calibration = calibrate_to_nlr(benchmark.grid, benchmark.conductor,
                                   benchmark.reference_ambient)
    ratings = rating_series(benchmark.grid, ambients, benchmark.conductor,
                            calibration, config.rating_mode)

    fleet = PowerNodeFleet(
        zones=zones,
        disp_cap=np.array([z.disp_cap_mw for z in benchmark.zones]),
        wind=w.values.to_numpy(),
        pv=p.values.to_numpy(),
        load=d.values.to_numpy(),
        storage=tuple(z.storage for z in benchmark.zones),
    )
    fleet = apply_scaling(fleet, config.res_scale, config.disp_scale)
    return PreparedScenario(
        config=config, benchmark=benchmark, fleet=fleet, index=w.index,
        ambients_by_zone=ambients, calibration=calibration, ratings=ratings,
    )


def _fmt(x):
    return repr(float(x))


def write_manifest(path, prepared: PreparedScenario):
    """Emit the run manifest: config echo, constants, versions."""
    cfg = prepared.config
    bench = prepared.benchmark
    lines = [
        f"dlrsim version: {__version__}",
        f"benchmark: {bench.name}",
        f"rating_mode: {cfg.rating_mode}",
        f"span: {cfg.start.isoformat()} .. {cfg.end.isoformat()}",
        f"res_scale: {_fmt(cfg.res_scale)}",
        f"disp_scale: {_fmt(cfg.disp_scale)}",
        f"horizon_steps: {cfg.horizon_steps or bench.horizon_steps}",
        f"slack: {bench.slack}",
        "conductor: " + " ".join(
            f"{f.name}={_fmt(getattr(bench.conductor, f.name))}"
            for f in dataclasses.fields(bench.conductor)
        ),
        "reference_ambient: " + " ".join(
            f"{f.name}={_fmt(getattr(bench.reference_ambient, f.name))}"
            for f in dataclasses.fields(bench.reference_ambient)
        ),
        "weights: " + " ".join(
            f"{k}={_fmt(v)}" for k, v in sorted({
                **dataclasses.asdict(bench.weights), **cfg.weight_overrides
            }.items())
        ),
    ]
    for key in sorted(prepared.calibration):
        lines.append(f"calibration {key}: {_fmt(prepared.calibration[key])}")
    Path(path).write_text("\n".join(lines) + "\n")


def run(config: ScenarioConfig):
    """Execute the full pipeline and write the artifact bundle.

    Returns ``(result, report, prepared)``; side effect: CSV and manifest
    files under ``config.output_dir``.
    """
    prepared = prepare(config)
    bench = prepared.benchmark
    ptdf = build_ptdf(bench.grid, bench.slack)
    weights = dataclasses.replace(bench.weights, **config.weight_overrides)
    problem = DispatchProblem(
        fleet=prepared.fleet,
        ptdf=ptdf,
        ratings=prepared.ratings,
        horizon=config.horizon_steps or bench.horizon_steps,
        step_seconds=STEP_SECONDS,
        weights=weights,
    )
    result = receding_horizon_run(problem)
    report = curtailment_report(result, prepared.fleet)

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    timestamps = [ts.isoformat() for ts in prepared.index]

    rows = []
    for zone, entry in report.items():
        rows.append({"zone": zone, **{k: _fmt(v) for k, v in entry.items()}})
    pd.DataFrame(rows).to_csv(out / "curtailment.csv", index=False)

    for j, key in enumerate(result.line_keys):
        pd.DataFrame({
            "timestamp": timestamps,
            "limit_mva": [_fmt(v) for v in prepared.ratings.limits[:, j]],
        }).to_csv(out / f"ratings_{key}.csv", index=False)
        pd.DataFrame({
            "timestamp": timestamps,
            "flow_mw": [_fmt(v) for v in result.flows[:, j]],
        }).to_csv(out / f"flows_{key}.csv", index=False)

    shed = result.load_shed.sum(axis=1)
    curt = (result.wind_curtailed + result.pv_curtailed).sum(axis=1)
    pd.DataFrame({
        "timestamp": timestamps,
        "curtailment_mw": [_fmt(v) for v in curt],
        "shedding_mw": [_fmt(v) for v in shed],
    }).to_csv(out / "hourly_balance.csv", index=False)

    write_manifest(out / "manifest.txt", prepared)
    return result, report, prepared


SWEEP_GRIDS = {
    "wind_speed": np.linspace(0.0, 25.0, 51),
    "wind_angle": np.linspace(0.0, 90.0, 46),
    "air_temp": np.linspace(-20.0, 40.0, 61),
    "solar": np.linspace(0.0, 1000.0, 51),
}


def sweep(conductor: ConductorSpec, parameter, base_amb: AmbientConditions,
          values=None):
    """Rating-vs-parameter sweep for diagnostics and plots.

    Returns a DataFrame with the swept values and AC ratings plus the
    end-to-end percentage change, reported relative to the larger of the
    two endpoint ratings.
    """
    if parameter not in SWEEP_GRIDS:
        raise UnknownParameter(
            f"{parameter!r}; choose one of {sorted(SWEEP_GRIDS)}"
        )
    if values is None:
        values = SWEEP_GRIDS[parameter]

    def with_param(v):
        if parameter == "wind_angle":
            return AmbientConditions(base_amb.wind_speed, v,
                                     base_amb.solar_radiation, base_amb.air_temp)
        return _with_parameter(base_amb, parameter, v)

    ratings = np.array([ac_line_rating(conductor, with_param(v)) for v in values])
    change = 100.0 * (ratings[-1] - ratings[0]) / max(ratings[0], ratings[-1])
    frame = pd.DataFrame({parameter: values, "ac_rating_a": ratings})
    frame.attrs["end_to_end_change_pct"] = change
    return frame
