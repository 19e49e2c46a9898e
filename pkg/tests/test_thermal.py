"""Unit tests for the conductor heat balance and rating computations."""

import math

import numpy as np
import pytest

from dlrsim.thermal import (
    STEFAN_BOLTZMANN,
    AmbientConditions,
    ConductorSpec,
    DegenerateRange,
    NegativeHeadroomWarning,
    ac_line_rating,
    ac_rating,
    convective_cooling,
    dc_rating,
    heat_balance_terms,
    joule_heating,
    radiative_cooling,
    sensitivity_fit,
    solar_heating,
    steady_state_temperature,
)


def amb(v=1.0, delta=45.0, s=1000.0, t=35.0):
    return AmbientConditions(wind_speed=v, wind_angle_deg=delta,
                             solar_radiation=s, air_temp=t)


class TestJouleHeating:
    def test_zero_current(self, zebra):
        assert joule_heating(zebra, 0.0, 20.0) == 0.0
        assert joule_heating(zebra, 0.0, 75.0) == 0.0

    def test_reference_value_at_20c(self, zebra):
        # alpha term vanishes at 20 degC
        assert joule_heating(zebra, 1000.0, 20.0) == pytest.approx(68.68, abs=1e-9)

    def test_reference_value_at_70c(self, zebra):
        # resistance grows by factor 1.20 at 70 degC
        assert joule_heating(zebra, 1000.0, 70.0) == pytest.approx(82.416, abs=1e-9)

    def test_negative_current_rejected(self, zebra):
        with pytest.raises(ValueError):
            joule_heating(zebra, -1.0, 20.0)


class TestSolarHeating:
    def test_zero_radiation(self, zebra):
        assert solar_heating(zebra, amb(s=0.0)) == 0.0

    def test_reference_value(self, zebra):
        assert solar_heating(zebra, amb(s=1000.0)) == pytest.approx(14.31, abs=1e-9)

    def test_bright_aluminum_absorptivity(self):
        spec = ConductorSpec(diameter_m=0.02862, r_dc_20=6.868e-5, alpha_r=0.004,
                             absorptivity=0.23, emissivity=0.5, t_max=75.0)
        assert solar_heating(spec, amb(s=1000.0)) == pytest.approx(6.5826, abs=1e-9)


class TestConvectiveCooling:
    def test_zero_at_equal_temperature(self, zebra):
        power, nusselt = convective_cooling(zebra, amb(t=35.0), 35.0)
        assert power == 0.0 and nusselt == 0.0

    def test_natural_convection_positive_at_zero_wind(self, zebra):
        power, nusselt = convective_cooling(zebra, amb(v=0.0, t=35.0), 75.0)
        assert power > 0.0 and nusselt > 0.0

    def test_monotone_in_wind_speed(self, zebra):
        p1, _ = convective_cooling(zebra, amb(v=1.0), 75.0)
        p5, _ = convective_cooling(zebra, amb(v=5.0), 75.0)
        assert p5 > p1

    def test_perpendicular_wind_cools_most(self, zebra):
        p45, _ = convective_cooling(zebra, amb(delta=45.0), 75.0)
        p90, _ = convective_cooling(zebra, amb(delta=90.0), 75.0)
        p0, _ = convective_cooling(zebra, amb(delta=0.0), 75.0)
        assert p0 < p45 < p90


class TestRadiativeCooling:
    def test_zero_at_equal_temperature(self, zebra):
        assert radiative_cooling(zebra, 35.0, 35.0) == 0.0

    def test_reference_value(self, zebra):
        expected = (math.pi * 0.02862 * 0.5 * STEFAN_BOLTZMANN
                    * ((75 + 273) ** 4 - (35 + 273) ** 4))
        got = radiative_cooling(zebra, 75.0, 35.0)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(14.5, abs=0.1)

    def test_negative_when_conductor_colder(self, zebra):
        assert radiative_cooling(zebra, 10.0, 35.0) < 0.0


class TestDcRating:
    def test_cooling_balance_at_limit(self, zebra, reference_ambient):
        i = dc_rating(zebra, reference_ambient)
        terms = heat_balance_terms(zebra, reference_ambient, i, zebra.t_max)
        assert terms.residual == pytest.approx(0.0, abs=1e-9)

    def test_colder_air_raises_rating(self, zebra):
        assert dc_rating(zebra, amb(t=-20.0)) > dc_rating(zebra, amb(t=40.0))

    def test_monotonicity_sampled(self, zebra):
        winds = [0.0, 1.0, 3.0, 8.0, 15.0, 25.0]
        ratings = [dc_rating(zebra, amb(v=v)) for v in winds]
        assert all(a <= b + 1e-9 for a, b in zip(ratings, ratings[1:]))

        angles = [0.0, 15.0, 30.0, 60.0, 90.0]
        ratings = [dc_rating(zebra, amb(v=5.0, delta=d)) for d in angles]
        assert all(a <= b + 1e-9 for a, b in zip(ratings, ratings[1:]))

        temps = [-20.0, 0.0, 20.0, 40.0]
        ratings = [dc_rating(zebra, amb(t=t)) for t in temps]
        assert all(a >= b - 1e-9 for a, b in zip(ratings, ratings[1:]))

        solars = [0.0, 250.0, 500.0, 1000.0]
        ratings = [dc_rating(zebra, amb(s=s)) for s in solars]
        assert all(a >= b - 1e-9 for a, b in zip(ratings, ratings[1:]))

    def test_negative_headroom_yields_zero(self):
        # a nearly non-radiating, highly absorbing conductor in still hot air
        spec = ConductorSpec(diameter_m=0.02862, r_dc_20=6.868e-5, alpha_r=0.004,
                             absorptivity=1.0, emissivity=0.0, t_max=45.0)
        hot = AmbientConditions(wind_speed=0.0, wind_angle_deg=45.0,
                                solar_radiation=1000.0, air_temp=44.0)
        with pytest.warns(NegativeHeadroomWarning):
            assert dc_rating(spec, hot) == 0.0


class TestAcRating:
    def test_zero(self):
        assert ac_rating(0.0) == 0.0

    def test_reference_values(self):
        assert ac_rating(1000.0) == pytest.approx(982.7, abs=0.1)
        assert ac_rating(3000.0) == pytest.approx(2884.2, abs=0.1)

    def test_below_dc_and_strictly_increasing(self):
        rng = np.random.default_rng(7)
        currents = np.sort(rng.uniform(1.0, 5000.0, 200))
        values = [ac_rating(i) for i in currents]
        assert all(v < i for v, i in zip(values, currents))
        assert all(a < b for a, b in zip(values, values[1:]))


class TestSteadyStateTemperature:
    def test_no_heating_returns_air_temperature(self, zebra):
        t = steady_state_temperature(zebra, amb(s=0.0, t=12.0), 0.0)
        assert t == pytest.approx(12.0, abs=0.1)

    def test_rating_round_trip(self, zebra, reference_ambient):
        i = dc_rating(zebra, reference_ambient)
        t = steady_state_temperature(zebra, reference_ambient, i)
        assert t == pytest.approx(zebra.t_max, abs=0.1)

    def test_overload_exceeds_limit(self, zebra, reference_ambient):
        i = dc_rating(zebra, reference_ambient)
        t = steady_state_temperature(zebra, reference_ambient, 1.1 * i)
        assert t > zebra.t_max

    def test_residual_monotone_in_temperature(self, zebra, reference_ambient):
        temps = np.linspace(36.0, 190.0, 40)
        residuals = [
            heat_balance_terms(zebra, reference_ambient, 800.0, t).residual
            for t in temps
        ]
        assert all(a < b for a, b in zip(residuals, residuals[1:]))


class TestSensitivityFit:
    def test_wind_slope_positive(self, zebra):
        fit = sensitivity_fit(zebra, amb(v=5.0, t=0.0), "wind_speed")
        assert fit.slope_pct_per_unit > 0

    def test_temperature_slope_negative(self, zebra):
        fit = sensitivity_fit(zebra, amb(v=5.0, t=0.0), "air_temp")
        assert fit.slope_pct_per_unit < 0

    def test_solar_slope_negative(self, zebra):
        fit = sensitivity_fit(zebra, amb(v=5.0, t=0.0), "solar")
        assert fit.slope_pct_per_unit < 0

    def test_degenerate_range(self, zebra):
        with pytest.raises(DegenerateRange):
            sensitivity_fit(zebra, amb(), "wind_speed", n_points=2)

    def test_range_outside_domain_rejected(self, zebra):
        with pytest.raises(ValueError):
            sensitivity_fit(zebra, amb(), "air_temp", sweep_range=(-40.0, 40.0))

    def test_unknown_parameter(self, zebra):
        with pytest.raises(ValueError):
            sensitivity_fit(zebra, amb(), "humidity")


def test_ambient_validation():
    with pytest.raises(ValueError):
        AmbientConditions(-1.0, 45.0, 0.0, 20.0)
    with pytest.raises(ValueError):
        AmbientConditions(1.0, 95.0, 0.0, 20.0)
    with pytest.raises(ValueError):
        AmbientConditions(1.0, 45.0, -5.0, 20.0)
    with pytest.raises(ValueError):
        AmbientConditions(1.0, 45.0, 0.0, 80.0)


def test_conductor_validation():
    with pytest.raises(ValueError):
        ConductorSpec(0.0, 6.868e-5, 0.004, 0.5, 0.5, 75.0)
    with pytest.raises(ValueError):
        ConductorSpec(0.02862, 6.868e-5, 0.004, 1.5, 0.5, 75.0)
    with pytest.raises(ValueError):
        ConductorSpec(0.02862, 6.868e-5, 0.004, 0.5, 0.5, 30.0)


def test_ac_line_rating_composition(zebra, reference_ambient):
    assert ac_line_rating(zebra, reference_ambient) == pytest.approx(
        ac_rating(dc_rating(zebra, reference_ambient)), rel=1e-12
    )
