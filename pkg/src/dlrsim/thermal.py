"""Steady-state thermal model of overhead conductors.

Heat balance of a bare overhead conductor: Joule and solar heating against
convective and radiative cooling.  From the balance the module computes the
DC/AC current rating (ampacity) for a given ambient condition, the steady
state conductor temperature for a given load current, and first-order
sensitivities of the rating to the ambient parameters.

Convection is modelled with the CIGRE correlations for stranded conductors;
the coefficient tables are in ``FORCED_NUSSELT_BANDS``, ``ANGLE_BANDS`` and
``NATURAL_NUSSELT_BANDS`` below.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

STEFAN_BOLTZMANN = 5.670e-8  # W/(m^2 K^4)
GRAVITY = 9.807              # m/s^2

# Kelvin offset used in the radiative term.  Kept at the integer value for
# reproducibility of the reference arithmetic.
KELVIN_OFFSET = 273.0

# Forced convection, Nu = B * Re^n.  Bands over Reynolds number; above the
# low-Re band the coefficients depend on the conductor surface roughness
# (stranded conductors with roughness > 0.05 are "rough").
# (re_low, re_high, B_smooth, n_smooth, B_rough, n_rough)
FORCED_NUSSELT_BANDS = [
    (0.0, 2.65e3, 0.641, 0.471, 0.641, 0.471),
    (2.65e3, float("inf"), 0.178, 0.633, 0.048, 0.800),
]
ROUGHNESS_THRESHOLD = 0.05

# Wind attack angle correction, Nu(delta) = Nu_90 * (A1 + B2 * sin(delta)^m1).
# (delta_low_deg, delta_high_deg, A1, B2, m1)
ANGLE_BANDS = [
    (0.0, 24.0, 0.42, 0.68, 1.08),
    (24.0, 90.0, 0.42, 0.58, 0.90),
]

# Natural convection, Nu = A2 * (Gr*Pr)^m2, banded over the Rayleigh number.
# (ra_low, ra_high, A2, m2)
NATURAL_NUSSELT_BANDS = [
    (0.0, 1e4, 0.850, 0.188),
    (1e4, float("inf"), 0.480, 0.250),
]


class NoConvergence(RuntimeError):
    """Temperature solver did not converge within the iteration cap."""


class NonPhysical(RuntimeError):
    """Heat balance has no root in the admissible temperature range."""


class DegenerateRange(ValueError):
    """Sensitivity sweep has too few points for a first-order fit."""


class NegativeHeadroomWarning(UserWarning):
    """Solar heating exceeds total cooling at the temperature limit."""


@dataclass(frozen=True)
class ConductorSpec:
    """Physical and electrical parameters of one conductor type."""

    diameter_m: float        # outer diameter (m)
    r_dc_20: float           # DC resistance at 20 degC (ohm/m)
    alpha_r: float           # resistance temperature coefficient (1/degC)
    absorptivity: float      # solar absorptivity, dimensionless
    emissivity: float        # surface emissivity, dimensionless
    t_max: float             # maximum allowed average conductor temperature (degC)
    surface_roughness: float = 0.1  # wire-diameter roughness ratio, dimensionless

    def __post_init__(self):
        if self.diameter_m <= 0:
            raise ValueError("diameter_m must be positive")
        if self.r_dc_20 <= 0:
            raise ValueError("r_dc_20 must be positive")
        if not 0.0 <= self.absorptivity <= 1.0:
            raise ValueError("absorptivity must be in [0, 1]")
        if not 0.0 <= self.emissivity <= 1.0:
            raise ValueError("emissivity must be in [0, 1]")
        if self.t_max <= 40.0:
            raise ValueError("t_max must exceed 40 degC")

    def resistance(self, t_av):
        """DC resistance (ohm/m) at average conductor temperature ``t_av``."""
        return self.r_dc_20 * (1.0 + self.alpha_r * (t_av - 20.0))


@dataclass(frozen=True)
class AmbientConditions:
    """Ambient weather at one zone and time step."""

    wind_speed: float       # m/s
    wind_angle_deg: float   # attack angle between wind and conductor, [0, 90]
    solar_radiation: float  # global solar radiation (W/m^2)
    air_temp: float         # degC

    def __post_init__(self):
        if self.wind_speed < 0:
            raise ValueError("wind_speed must be >= 0")
        if not 0.0 <= self.wind_angle_deg <= 90.0:
            raise ValueError("wind_angle_deg must be in [0, 90]")
        if self.solar_radiation < 0:
            raise ValueError("solar_radiation must be >= 0")
        if not -60.0 <= self.air_temp <= 60.0:
            raise ValueError("air_temp out of range [-60, 60] degC")


@dataclass(frozen=True)
class HeatBalanceTerms:
    """All four heat balance terms, in W per metre of conductor."""

    p_joule: float
    p_solar: float
    p_conv: float
    p_rad: float

    @property
    def residual(self):
        """Net cooling surplus: (P_c + P_r) - (P_J + P_S)."""
        return (self.p_conv + self.p_rad) - (self.p_joule + self.p_solar)


def air_thermal_conductivity(t_film):
    """Thermal conductivity of air (W/m/K) at film temperature (degC)."""
    return 2.42e-2 + 7.2e-5 * t_film


def air_kinematic_viscosity(t_film):
    """Kinematic viscosity of air (m^2/s) at film temperature (degC)."""
    return 1.32e-5 + 9.5e-8 * t_film


def air_prandtl(t_film):
    """Prandtl number of air at film temperature (degC)."""
    return 0.715 - 2.5e-4 * t_film


def joule_heating(spec: ConductorSpec, i_dc, t_av):
    """Resistive heating (W/m) of a steel-cored conductor at current ``i_dc``."""
    if i_dc < 0:
        raise ValueError("current must be >= 0")
    return i_dc * i_dc * spec.resistance(t_av)


def solar_heating(spec: ConductorSpec, amb: AmbientConditions):
    """Solar heating (W/m) absorbed over the projected conductor surface."""
    return spec.absorptivity * amb.solar_radiation * spec.diameter_m


def _forced_nusselt(spec: ConductorSpec, amb: AmbientConditions, t_film):
    """Forced-convection Nusselt number including the attack-angle correction."""
    if amb.wind_speed <= 0:
        return 0.0
    reynolds = amb.wind_speed * spec.diameter_m / air_kinematic_viscosity(t_film)
    rough = spec.surface_roughness > ROUGHNESS_THRESHOLD
    for re_lo, re_hi, b_smooth, n_smooth, b_rough, n_rough in FORCED_NUSSELT_BANDS:
        if re_lo <= reynolds < re_hi:
            b, n = (b_rough, n_rough) if rough else (b_smooth, n_smooth)
            nu_90 = b * reynolds**n
            break
    else:  # pragma: no cover - bands span [0, inf)
        raise AssertionError("Reynolds number outside correlation bands")
    delta = amb.wind_angle_deg
    for d_lo, d_hi, a1, b2, m1 in ANGLE_BANDS:
        if d_lo <= delta <= d_hi:
            return nu_90 * (a1 + b2 * math.sin(math.radians(delta)) ** m1)
    raise AssertionError("attack angle outside [0, 90]")  # pragma: no cover


def _natural_nusselt(spec: ConductorSpec, t_s, t_a, t_film):
    """Natural-convection Nusselt number from the Rayleigh number."""
    if t_s <= t_a:
        return 0.0
    nu_f = air_kinematic_viscosity(t_film)
    grashof = (
        spec.diameter_m**3 * (t_s - t_a) * GRAVITY
        / ((t_film + KELVIN_OFFSET) * nu_f * nu_f)
    )
    rayleigh = grashof * air_prandtl(t_film)
    for ra_lo, ra_hi, a2, m2 in NATURAL_NUSSELT_BANDS:
        if ra_lo <= rayleigh < ra_hi:
            return a2 * rayleigh**m2
    raise AssertionError("Rayleigh number outside correlation bands")  # pragma: no cover


def convective_cooling(spec: ConductorSpec, amb: AmbientConditions, t_s):
    """Convective cooling (W/m) and the Nusselt number actually used.

    The larger of the natural and forced convection cases applies.  A
    conductor colder than the surrounding air is not heated convectively
    here; the term clamps at zero.
    """
    if t_s <= amb.air_temp:
        return 0.0, 0.0
    t_film = 0.5 * (t_s + amb.air_temp)
    nusselt = max(
        _forced_nusselt(spec, amb, t_film),
        _natural_nusselt(spec, t_s, amb.air_temp, t_film),
    )
    power = math.pi * air_thermal_conductivity(t_film) * (t_s - amb.air_temp) * nusselt
    return power, nusselt


def radiative_cooling(spec: ConductorSpec, t_s, t_a):
    """Radiative cooling (W/m); negative when the conductor is colder than air."""
    return (
        math.pi
        * spec.diameter_m
        * spec.emissivity
        * STEFAN_BOLTZMANN
        * ((t_s + KELVIN_OFFSET) ** 4 - (t_a + KELVIN_OFFSET) ** 4)
    )


def heat_balance_terms(spec: ConductorSpec, amb: AmbientConditions, i_dc, t_av):
    """Evaluate all four heat balance terms at conductor temperature ``t_av``."""
    p_conv, _ = convective_cooling(spec, amb, t_av)
    return HeatBalanceTerms(
        p_joule=joule_heating(spec, i_dc, t_av),
        p_solar=solar_heating(spec, amb),
        p_conv=p_conv,
        p_rad=radiative_cooling(spec, t_av, amb.air_temp),
    )


def dc_rating(spec: ConductorSpec, amb: AmbientConditions):
    """DC current rating (A): the current holding the conductor at its limit.

    Solves the heat balance for current with the conductor temperature fixed
    at ``spec.t_max``.  If solar heating exceeds the total cooling available
    at the limit (extreme ambient), the rating is defined as 0 A and a
    ``NegativeHeadroomWarning`` is emitted.
    """
    t = spec.t_max
    p_conv, _ = convective_cooling(spec, amb, t)
    headroom = p_conv + radiative_cooling(spec, t, amb.air_temp) - solar_heating(spec, amb)
    if headroom < 0:
        warnings.warn(
            "solar heating exceeds cooling at the conductor limit; rating set to 0 A",
            NegativeHeadroomWarning,
        )
        return 0.0
    return math.sqrt(headroom / spec.resistance(t))


def ac_rating(i_dc):
    """Equivalent AC rating (A) of a DC rating, skin/core-effect corrected."""
    if i_dc < 0:
        raise ValueError("current must be >= 0")
    return i_dc / math.sqrt(1.0123 + 2.319e-5 * i_dc)


def ac_line_rating(spec: ConductorSpec, amb: AmbientConditions):
    """AC ampacity (A) for one conductor under the given ambient condition."""
    return ac_rating(dc_rating(spec, amb))


# Bisection bracket ceiling for the temperature solver (degC).
_T_CEILING = 200.0
_MAX_ITERATIONS = 60
TEMPERATURE_TOLERANCE = 0.1  # degC


def steady_state_temperature(spec: ConductorSpec, amb: AmbientConditions, i_load):
    """Average conductor temperature (degC) carrying ``i_load`` in steady state.

    The balance residual (cooling minus heating) is strictly increasing in
    conductor temperature, so the root is bracketed in
    [air temperature, 200 degC] and found by bisection to within 0.1 degC.
    """
    if i_load < 0:
        raise ValueError("current must be >= 0")

    def residual(t):
        return heat_balance_terms(spec, amb, i_load, t).residual

    lo, hi = amb.air_temp, _T_CEILING
    if residual(lo) >= 0.0:
        # no net heating at air temperature: conductor sits at (or below) it
        return lo
    if residual(hi) < 0.0:
        raise NoConvergence(
            f"no steady state below {_T_CEILING} degC for current {i_load} A"
        )
    for _ in range(_MAX_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if residual(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= TEMPERATURE_TOLERANCE:
            return 0.5 * (lo + hi)
    raise NoConvergence("bisection did not reach tolerance")  # pragma: no cover


# Sweep domains for the ambient sensitivity analysis.
SENSITIVITY_DOMAINS = {
    "air_temp": (-20.0, 40.0),
    "wind_speed": (0.0, 25.0),
    "solar": (0.0, 1000.0),
}


@dataclass(frozen=True)
class SensitivityFit:
    """First-order fit of the AC rating against one ambient parameter."""

    parameter: str
    slope_pct_per_unit: float   # % rating change (of start-of-sweep rating) per unit
    slope_pct_per_pct: float    # % rating change per % of the parameter range
    rating_start: float         # AC rating at the sweep start (A)
    sweep_values: np.ndarray
    sweep_ratings: np.ndarray


def _with_parameter(base: AmbientConditions, parameter, value):
    if parameter == "air_temp":
        return AmbientConditions(base.wind_speed, base.wind_angle_deg,
                                 base.solar_radiation, value)
    if parameter == "wind_speed":
        return AmbientConditions(value, base.wind_angle_deg,
                                 base.solar_radiation, base.air_temp)
    if parameter == "solar":
        return AmbientConditions(base.wind_speed, base.wind_angle_deg,
                                 value, base.air_temp)
    raise ValueError(f"unknown sweep parameter {parameter!r}")


def sensitivity_fit(spec: ConductorSpec, base_amb: AmbientConditions, parameter,
                    sweep_range=None, n_points=51) -> SensitivityFit:
    """Least-squares linear sensitivity of the AC rating to one parameter.

    The swept parameter replaces the corresponding field of ``base_amb``;
    the others stay fixed.  The slope is reported both per physical unit and
    per percent of the sweep range, normalised by the rating at the start of
    the sweep.
    """
    if parameter not in SENSITIVITY_DOMAINS:
        raise ValueError(f"unknown sweep parameter {parameter!r}")
    lo, hi = sweep_range if sweep_range is not None else SENSITIVITY_DOMAINS[parameter]
    dom_lo, dom_hi = SENSITIVITY_DOMAINS[parameter]
    if lo < dom_lo or hi > dom_hi:
        raise ValueError(f"sweep range [{lo}, {hi}] outside domain "
                         f"[{dom_lo}, {dom_hi}] for {parameter}")
    if n_points < 3:
        raise DegenerateRange("need at least 3 sweep points for a linear fit")
    values = np.linspace(lo, hi, n_points)
    ratings = np.array([
        ac_line_rating(spec, _with_parameter(base_amb, parameter, v)) for v in values
    ])
    slope, _ = np.polyfit(values, ratings, 1)
    rating_start = ratings[0]
    slope_pct_per_unit = 100.0 * slope / rating_start
    slope_pct_per_pct = slope_pct_per_unit * (hi - lo) / 100.0
    return SensitivityFit(
        parameter=parameter,
        slope_pct_per_unit=slope_pct_per_unit,
        slope_pct_per_pct=slope_pct_per_pct,
        rating_start=rating_start,
        sweep_values=values,
        sweep_ratings=ratings,
    )
