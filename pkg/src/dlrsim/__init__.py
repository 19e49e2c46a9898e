"""Dynamic line rating simulation toolkit.

Thermal conductor model, weather reconstruction from RES feed-ins, DC grid
flows via PTDF, and receding-horizon economic dispatch on a six-zone
benchmark network.
"""

__version__ = "0.1.0"

from .thermal import (                       # noqa: F401
    AmbientConditions,
    ConductorSpec,
    HeatBalanceTerms,
    ac_rating,
    ac_line_rating,
    convective_cooling,
    dc_rating,
    joule_heating,
    radiative_cooling,
    sensitivity_fit,
    solar_heating,
    steady_state_temperature,
)
from .weather import (                       # noqa: F401
    DailyTempRecord,
    FeedInSeries,
    SolarCalibration,
    WindCalibration,
    air_temperature,
    calibrate_wind,
    reconstruct_zone,
    solar_radiation,
    wind_speed,
)
from .grid import (                          # noqa: F401
    GridModel,
    Line,
    PtdfMatrix,
    RatingSeries,
    ampacity_to_mva,
    build_ptdf,
    calibrate_to_nlr,
    corridor_dlr,
    rating_series,
)
from .dispatch import (                      # noqa: F401
    DispatchProblem,
    DispatchResult,
    DispatchWeights,
    PowerNodeFleet,
    StorageParams,
    build_qp,
    curtailment_report,
    receding_horizon_run,
    solve_qp,
)
