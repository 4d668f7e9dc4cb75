"""Continuous measurement, state estimation and feedback cooling of a levitated nano-particle."""

from ._version import __version__
from .config import Settings, get_settings, load_settings, set_settings
from .core import (
    GroundStateScale,
    SimParams,
    TrapParams,
    ground_state_scale,
    normalize_params,
    thermal_budget,
    thermal_occupation,
    trap_params_from_sim,
)
from .dynamics import (
    GaussianState,
    SimulationMode,
    TrajectoryOutput,
    conditional_step,
    estimator_step,
    simulate_trajectory,
)
from .errors import (
    IntegratorBlowup,
    LambDickeViolation,
    LevicoolError,
    MeasurementOff,
    ParameterError,
    PositivityLoss,
    SingularSystem,
    TruncationLeak,
)
from .logging_utils import configure_logging, get_logger
from .measurement import (
    OpticalProbe,
    RecoilGeometry,
    RecordIncrement,
    generate_record_increment,
    kappa_from_probe,
    lamb_dicke_check,
    photon_rate,
    recoil_fraction,
    resolution,
)
from .oracle import build_operators, compare_oracle, sme_step
from .runner import ScenarioConfig, build_scenario_config, run_scenario
from .steady import (
    conditional_steady_state,
    cooling_landscape,
    excess_steady_state,
    phonon_number,
    purity,
)

__all__ = [
    "GaussianState",
    "GroundStateScale",
    "IntegratorBlowup",
    "LambDickeViolation",
    "LevicoolError",
    "MeasurementOff",
    "OpticalProbe",
    "ParameterError",
    "PositivityLoss",
    "RecoilGeometry",
    "RecordIncrement",
    "ScenarioConfig",
    "Settings",
    "SimParams",
    "SimulationMode",
    "SingularSystem",
    "TrajectoryOutput",
    "TrapParams",
    "TruncationLeak",
    "__version__",
    "build_operators",
    "build_scenario_config",
    "compare_oracle",
    "conditional_steady_state",
    "conditional_step",
    "configure_logging",
    "cooling_landscape",
    "estimator_step",
    "excess_steady_state",
    "generate_record_increment",
    "get_logger",
    "get_settings",
    "ground_state_scale",
    "kappa_from_probe",
    "lamb_dicke_check",
    "load_settings",
    "normalize_params",
    "phonon_number",
    "photon_rate",
    "purity",
    "recoil_fraction",
    "resolution",
    "run_scenario",
    "set_settings",
    "simulate_trajectory",
    "sme_step",
    "thermal_budget",
    "thermal_occupation",
    "trap_params_from_sim",
]
