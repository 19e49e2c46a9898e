"""Shared fixtures: the stock conductor and the shipped benchmark."""

import pytest

from dlrsim.scenario import load_benchmark
from dlrsim.thermal import AmbientConditions, ConductorSpec


@pytest.fixture(scope="session")
def zebra() -> ConductorSpec:
    """Zebra ACSR conductor, as shipped in the benchmark config."""
    return ConductorSpec(
        diameter_m=0.02862,
        r_dc_20=6.868e-5,
        alpha_r=0.004,
        absorptivity=0.5,
        emissivity=0.5,
        t_max=75.0,
        surface_roughness=0.0625,
    )


@pytest.fixture(scope="session")
def benchmark():
    return load_benchmark()


@pytest.fixture
def reference_ambient() -> AmbientConditions:
    """Conservative ambient the static ratings assume."""
    return AmbientConditions(wind_speed=1.0, wind_angle_deg=45.0,
                             solar_radiation=1000.0, air_temp=35.0)
