"""Simulator for recoil-driven probe gain in a cold, dispersive gas.

The package integrates the coupled momentum-ladder equations (populations,
nearest-neighbour coherences, probe amplitude) under a chirped two-photon
detuning and provides the measurement drivers, fitting helpers, and the
command-line front end around them.
"""

from .analysis import (
    FitResult,
    HysteresisPoint,
    OracleSpectrum,
    SpectrumResult,
    fit_exponential_relaxation,
    fit_power_law,
    gain_of,
    hysteresis_ratio,
    linear_response_spectrum,
    refine_peak,
)
from .experiments import (
    PowerPoint,
    SwitchingMetrics,
    ThermalizationResult,
    chirped_sweep,
    find_gain_peak_detuning,
    hysteresis_map,
    initial_state,
    power_sweep,
    static_spectrum,
    switching_metrics,
    thermalization_protocol,
)
from .integrator import (
    NegativePopulationWarning,
    SolverDiagnostics,
    SolverOptions,
    Trajectory,
    integrate,
    integrate_fixed_detuning,
    step_fixed,
)
from .model import (
    ChirpSchedule,
    ConfigurationWarning,
    EnsembleState,
    ModelParams,
    MomentumGrid,
    adiabatic_probe,
    cooperativity,
    rhs,
    scaled_rates,
    thermal_distribution,
)
from .units import PhysicalParams, PhysicalUnits, to_dimensionless, to_physical

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "MomentumGrid",
    "ModelParams",
    "EnsembleState",
    "ChirpSchedule",
    "ConfigurationWarning",
    "thermal_distribution",
    "rhs",
    "adiabatic_probe",
    "scaled_rates",
    "cooperativity",
    # units
    "PhysicalUnits",
    "PhysicalParams",
    "to_dimensionless",
    "to_physical",
    # integrator
    "SolverOptions",
    "SolverDiagnostics",
    "Trajectory",
    "integrate",
    "integrate_fixed_detuning",
    "step_fixed",
    "NegativePopulationWarning",
    # analysis
    "FitResult",
    "SpectrumResult",
    "HysteresisPoint",
    "OracleSpectrum",
    "gain_of",
    "linear_response_spectrum",
    "fit_exponential_relaxation",
    "fit_power_law",
    "hysteresis_ratio",
    "refine_peak",
    # experiments
    "PowerPoint",
    "SwitchingMetrics",
    "ThermalizationResult",
    "initial_state",
    "chirped_sweep",
    "hysteresis_map",
    "power_sweep",
    "static_spectrum",
    "thermalization_protocol",
    "switching_metrics",
    "find_gain_peak_detuning",
]
