"""Strict JSON run configuration.

One file drives every subcommand.  The schema is nested JSON with a flat,
explicit key set per section; unknown keys are rejected (a silent typo in a
physics parameter is the costliest failure mode).  Parameters are given
either directly in recoil units (``"units": "dimensionless"``) or in
laboratory units (``"units": "physical"``, keys carry their unit in the
name); physical input is converted on load and the resolved configuration
always echoes in recoil units.

``load_config`` also accepts a manifest written by a previous run and loads
the embedded config echo, so any run can be reproduced from its manifest.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import EdgePopulationTooLarge, ParseError, UnknownKey, ValidationError
from .integrator import SolverOptions
from .model import ChirpSchedule, ModelParams, MomentumGrid, thermal_distribution
from .units import PhysicalParams, PhysicalUnits, to_dimensionless

__all__ = ["RunConfig", "load_config", "resolve_config"]

_NUMBER = (int, float)


def _require_mapping(value, path):
    if not isinstance(value, dict):
        raise ValidationError(f"{path}: expected an object")
    return value


def _get_number(section, key, default, path, positive=False, nonnegative=False):
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, _NUMBER):
        raise ValidationError(f"{path}.{key}: expected a number")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{path}.{key}: must be finite")
    if positive and value <= 0:
        raise ValidationError(f"{path}.{key}: must be > 0")
    if nonnegative and value < 0:
        raise ValidationError(f"{path}.{key}: must be >= 0")
    return value


def _get_int(section, key, default, path, minimum=None):
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{path}.{key}: expected an integer")
    if minimum is not None and value < minimum:
        raise ValidationError(f"{path}.{key}: must be >= {minimum}")
    return value


def _get_optional_number(section, key, path, positive=False):
    if key not in section or section[key] is None:
        return None
    return _get_number(section, key, None, path, positive=positive)


def _get_choice(section, key, default, choices, path):
    value = section.get(key, default)
    if value not in choices:
        raise ValidationError(f"{path}.{key}: expected one of {sorted(choices)}")
    return value


def _get_number_list(section, key, default, path, positive=False, ascending=False):
    value = section.get(key, default)
    if not isinstance(value, list) or not value:
        raise ValidationError(f"{path}.{key}: expected a non-empty list of numbers")
    out = []
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, _NUMBER):
            raise ValidationError(f"{path}.{key}[{i}]: expected a number")
        item = float(item)
        if positive and item <= 0:
            raise ValidationError(f"{path}.{key}[{i}]: must be > 0")
        out.append(item)
    if ascending and any(b <= a for a, b in zip(out, out[1:])):
        raise ValidationError(f"{path}.{key}: must be sorted strictly ascending")
    return out


def _reject_unknown(section, allowed, path):
    for key in section:
        if key not in allowed:
            raise UnknownKey(f"{path}.{key}: unknown key")


@dataclass(frozen=True)
class SweepSettings:
    delta_min: float
    delta_max: float
    rate: float
    direction: str  # "minus" | "plus" | "both"

    def schedule_minus(self) -> ChirpSchedule:
        return ChirpSchedule.between(self.delta_max, self.delta_min, self.rate)

    def schedule_plus(self) -> ChirpSchedule:
        return ChirpSchedule.between(self.delta_min, self.delta_max, self.rate)


@dataclass(frozen=True)
class SpectrumSettings:
    delta_min: float
    delta_max: float
    n_points: int
    steady_tol: float
    window: float | None
    max_windows: int


@dataclass(frozen=True)
class HysteresisSettings:
    rates: tuple
    delta_min: float
    delta_max: float
    threshold_rate: float | None


@dataclass(frozen=True)
class PowerSettings:
    a_in_values: tuple
    rate: float
    delta_min: float
    delta_max: float


@dataclass(frozen=True)
class ThermalizeSettings:
    strong_a_in: float
    weak_a_in: float
    t_strong: float | None
    t_weak: float | None
    delta: float | None
    n_samples: int
    pump_detunings: tuple | None
    reference_detuning: float


@dataclass(frozen=True)
class MetricsSettings:
    power_w: float
    tau_s: float
    wavelength_m: float
    waist_m: float


@dataclass(frozen=True)
class OracleSettings:
    delta_min: float
    delta_max: float
    n_points: int


@dataclass(frozen=True)
class RunConfig:
    grid: MomentumGrid
    edge_tolerance: float
    params: ModelParams
    solver: SolverOptions
    sweep: SweepSettings
    spectrum: SpectrumSettings
    hysteresis: HysteresisSettings
    power: PowerSettings
    thermalize: ThermalizeSettings
    metrics: MetricsSettings
    oracle: OracleSettings
    echo: dict


_TOP_KEYS = {
    "units",
    "physical_units",
    "grid",
    "model",
    "solver",
    "sweep",
    "spectrum",
    "hysteresis",
    "power",
    "thermalize",
    "metrics",
    "oracle",
}

_MODEL_KEYS_DIMLESS = {
    "beta_re",
    "beta_im",
    "n_atoms",
    "kappa",
    "gamma_pop",
    "gamma_coh",
    "a_in_re",
    "a_in_im",
    "sigma_p",
    "omega_r",
}

_MODEL_KEYS_PHYSICAL = {
    "beta_re",
    "beta_im",
    "n_atoms",
    "kappa_per_s",
    "gamma_pop_per_s",
    "gamma_coh_per_s",
    "a_in_re",
    "a_in_im",
    "temperature_uk",
}


def _resolve_units_block(section):
    path = "physical_units"
    _reject_unknown(
        section,
        {"recoil_frequency_hz", "wavelength_m", "atom_mass_kg", "photon_momentum_step"},
        path,
    )
    defaults = PhysicalUnits()
    return PhysicalUnits(
        recoil_frequency_hz=_get_number(
            section, "recoil_frequency_hz", defaults.recoil_frequency_hz, path, positive=True
        ),
        wavelength_m=_get_number(section, "wavelength_m", defaults.wavelength_m, path, positive=True),
        atom_mass_kg=_get_number(section, "atom_mass_kg", defaults.atom_mass_kg, path, positive=True),
        photon_momentum_step=_get_number(
            section, "photon_momentum_step", defaults.photon_momentum_step, path, positive=True
        ),
    )


def _build_params(value, path):
    try:
        return ModelParams(**value)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def resolve_config(obj: dict) -> RunConfig:
    """Validate a parsed JSON document and materialize every default."""
    obj = _require_mapping(obj, "<config>")
    if "artifact" in obj and "config" in obj:
        # a run manifest: reuse its embedded config echo
        obj = _require_mapping(obj["config"], "config")
    _reject_unknown(obj, _TOP_KEYS, "<config>")

    units = _get_choice(obj, "units", "dimensionless", {"dimensionless", "physical"}, "<config>")
    physical = units == "physical"
    if not physical and "physical_units" in obj:
        raise ValidationError("physical_units: only allowed when units = physical")

    grid_sec = _require_mapping(obj.get("grid", {}), "grid")
    _reject_unknown(grid_sec, {"half_width", "edge_tolerance"}, "grid")
    half_width = _get_int(grid_sec, "half_width", 64, "grid", minimum=1)
    edge_tolerance = _get_number(grid_sec, "edge_tolerance", 1e-8, "grid", positive=True)
    grid = MomentumGrid(half_width)

    model_sec = _require_mapping(obj.get("model", {}), "model")
    if physical:
        _reject_unknown(model_sec, _MODEL_KEYS_PHYSICAL, "model")
        punits = _resolve_units_block(_require_mapping(obj.get("physical_units", {}), "physical_units"))
        phys = PhysicalParams(
            beta=complex(
                _get_number(model_sec, "beta_re", 0.0, "model"),
                _get_number(model_sec, "beta_im", 0.0, "model"),
            ),
            n_atoms=_get_number(model_sec, "n_atoms", 0.0, "model", nonnegative=True),
            kappa_per_s=_get_number(model_sec, "kappa_per_s", 1e10, "model", positive=True),
            gamma_pop_per_s=_get_number(model_sec, "gamma_pop_per_s", 1.2e3, "model", nonnegative=True),
            gamma_coh_per_s=_get_number(model_sec, "gamma_coh_per_s", 2.4e4, "model", nonnegative=True),
            a_in=complex(
                _get_number(model_sec, "a_in_re", 1.0, "model"),
                _get_number(model_sec, "a_in_im", 0.0, "model"),
            ),
            temperature_uk=_get_number(model_sec, "temperature_uk", 20.0, "model", positive=True),
            delta_start_hz=0.0,
            delta_end_hz=0.0,
            scan_rate_mhz_per_ms=1.0,
        )
        sweep_sec = _require_mapping(obj.get("sweep", {}), "sweep")
        _reject_unknown(sweep_sec, {"delta_min_hz", "delta_max_hz", "rate_mhz_per_ms", "direction"}, "sweep")
        delta_min_hz = _get_number(sweep_sec, "delta_min_hz", -170e3, "sweep")
        delta_max_hz = _get_number(sweep_sec, "delta_max_hz", 8e3, "sweep")
        rate_mhz = _get_number(sweep_sec, "rate_mhz_per_ms", 0.07, "sweep", positive=True)
        direction = _get_choice(sweep_sec, "direction", "both", {"minus", "plus", "both"}, "sweep")
        phys_sweep = PhysicalParams(
            beta=phys.beta,
            n_atoms=phys.n_atoms,
            kappa_per_s=phys.kappa_per_s,
            gamma_pop_per_s=phys.gamma_pop_per_s,
            gamma_coh_per_s=phys.gamma_coh_per_s,
            a_in=phys.a_in,
            temperature_uk=phys.temperature_uk,
            delta_start_hz=delta_min_hz,
            delta_end_hz=delta_max_hz,
            scan_rate_mhz_per_ms=rate_mhz,
        )
        try:
            params, span_schedule = to_dimensionless(phys_sweep, punits)
        except ValueError as exc:
            raise ValidationError(f"model: {exc}") from exc
        sweep = SweepSettings(
            delta_min=span_schedule.delta_start,
            delta_max=span_schedule.delta_end,
            rate=span_schedule.rate,
            direction=direction,
        )
    else:
        _reject_unknown(model_sec, _MODEL_KEYS_DIMLESS, "model")
        params = _build_params(
            {
                "beta": complex(
                    _get_number(model_sec, "beta_re", 0.0, "model"),
                    _get_number(model_sec, "beta_im", 0.0, "model"),
                ),
                "n_atoms": _get_number(model_sec, "n_atoms", 0.0, "model", nonnegative=True),
                "kappa": _get_number(model_sec, "kappa", 1e5, "model", positive=True),
                "gamma_pop": _get_number(model_sec, "gamma_pop", 0.05, "model", nonnegative=True),
                "gamma_coh": _get_number(model_sec, "gamma_coh", 1.0, "model", nonnegative=True),
                "a_in": complex(
                    _get_number(model_sec, "a_in_re", 1.0, "model"),
                    _get_number(model_sec, "a_in_im", 0.0, "model"),
                ),
                "sigma_p": _get_number(model_sec, "sigma_p", 3.7, "model"),
                "omega_r": _get_number(model_sec, "omega_r", 1.0, "model"),
            },
            "model",
        )
        sweep_sec = _require_mapping(obj.get("sweep", {}), "sweep")
        _reject_unknown(sweep_sec, {"delta_min", "delta_max", "rate", "direction"}, "sweep")
        sweep = SweepSettings(
            delta_min=_get_number(sweep_sec, "delta_min", -45.0, "sweep"),
            delta_max=_get_number(sweep_sec, "delta_max", 2.0, "sweep"),
            rate=_get_number(sweep_sec, "rate", 0.8, "sweep", positive=True),
            direction=_get_choice(sweep_sec, "direction", "both", {"minus", "plus", "both"}, "sweep"),
        )
    if sweep.delta_min >= sweep.delta_max:
        raise ValidationError("sweep.delta_min: must be below sweep.delta_max")
    try:
        thermal_distribution(grid, params.sigma_p, edge_tolerance=edge_tolerance)
    except EdgePopulationTooLarge as exc:
        raise ValidationError(f"grid.half_width: {exc}") from exc

    solver_sec = _require_mapping(obj.get("solver", {}), "solver")
    _reject_unknown(
        solver_sec,
        {"mode", "method", "dt_initial", "rel_tol", "abs_tol", "max_steps", "sample_interval"},
        "solver",
    )
    try:
        solver = SolverOptions(
            mode=_get_choice(
                solver_sec, "mode", "adiabatic-probe", {"adiabatic-probe", "full-stiff"}, "solver"
            ),
            method=_get_choice(
                solver_sec, "method", "adaptive-embedded", {"adaptive-embedded", "fixed-rk4"}, "solver"
            ),
            dt_initial=_get_number(solver_sec, "dt_initial", 1e-3, "solver", positive=True),
            rel_tol=_get_number(solver_sec, "rel_tol", 1e-8, "solver", positive=True),
            abs_tol=_get_number(solver_sec, "abs_tol", 1e-11, "solver", positive=True),
            max_steps=_get_int(solver_sec, "max_steps", 10_000_000, "solver", minimum=1),
            sample_interval=_get_number(solver_sec, "sample_interval", 0.25, "solver", positive=True),
        )
    except ValueError as exc:
        raise ValidationError(f"solver: {exc}") from exc

    spectrum_sec = _require_mapping(obj.get("spectrum", {}), "spectrum")
    _reject_unknown(
        spectrum_sec,
        {"delta_min", "delta_max", "n_points", "steady_tol", "window", "max_windows"},
        "spectrum",
    )
    spectrum = SpectrumSettings(
        delta_min=_get_number(spectrum_sec, "delta_min", -18.0, "spectrum"),
        delta_max=_get_number(spectrum_sec, "delta_max", 18.0, "spectrum"),
        n_points=_get_int(spectrum_sec, "n_points", 25, "spectrum", minimum=2),
        steady_tol=_get_number(spectrum_sec, "steady_tol", 1e-9, "spectrum", positive=True),
        window=_get_optional_number(spectrum_sec, "window", "spectrum", positive=True),
        max_windows=_get_int(spectrum_sec, "max_windows", 64, "spectrum", minimum=1),
    )
    if spectrum.delta_min >= spectrum.delta_max:
        raise ValidationError("spectrum.delta_min: must be below spectrum.delta_max")

    hysteresis_sec = _require_mapping(obj.get("hysteresis", {}), "hysteresis")
    _reject_unknown(hysteresis_sec, {"rates", "delta_min", "delta_max", "threshold_rate"}, "hysteresis")
    hysteresis = HysteresisSettings(
        rates=tuple(
            _get_number_list(
                hysteresis_sec, "rates", [0.2, 0.4, 0.8, 1.6], "hysteresis", positive=True, ascending=True
            )
        ),
        delta_min=_get_number(hysteresis_sec, "delta_min", sweep.delta_min, "hysteresis"),
        delta_max=_get_number(hysteresis_sec, "delta_max", sweep.delta_max, "hysteresis"),
        threshold_rate=_get_optional_number(hysteresis_sec, "threshold_rate", "hysteresis", positive=True),
    )

    power_sec = _require_mapping(obj.get("power", {}), "power")
    _reject_unknown(power_sec, {"a_in_values", "rate", "delta_min", "delta_max"}, "power")
    power = PowerSettings(
        a_in_values=tuple(
            _get_number_list(power_sec, "a_in_values", [0.15, 0.25, 0.4, 0.6], "power", positive=True)
        ),
        rate=_get_number(power_sec, "rate", sweep.rate, "power", positive=True),
        delta_min=_get_number(power_sec, "delta_min", sweep.delta_min, "power"),
        delta_max=_get_number(power_sec, "delta_max", sweep.delta_max, "power"),
    )

    thermalize_sec = _require_mapping(obj.get("thermalize", {}), "thermalize")
    _reject_unknown(
        thermalize_sec,
        {
            "strong_a_in",
            "weak_a_in",
            "t_strong",
            "t_weak",
            "delta",
            "n_samples",
            "pump_detunings",
            "reference_detuning",
        },
        "thermalize",
    )
    pump_detunings = None
    if thermalize_sec.get("pump_detunings") is not None:
        pump_detunings = tuple(
            _get_number_list(thermalize_sec, "pump_detunings", None, "thermalize", positive=True)
        )
        if len(pump_detunings) < 3:
            raise ValidationError("thermalize.pump_detunings: need at least 3 points for the fit")
    strong_default = _get_number(thermalize_sec, "strong_a_in", 0.45, "thermalize", positive=True)
    thermalize = ThermalizeSettings(
        strong_a_in=strong_default,
        weak_a_in=_get_number(
            thermalize_sec, "weak_a_in", strong_default / 30.0, "thermalize", positive=True
        ),
        t_strong=_get_optional_number(thermalize_sec, "t_strong", "thermalize", positive=True),
        t_weak=_get_optional_number(thermalize_sec, "t_weak", "thermalize", positive=True),
        delta=_get_optional_number(thermalize_sec, "delta", "thermalize"),
        n_samples=_get_int(thermalize_sec, "n_samples", 600, "thermalize", minimum=16),
        pump_detunings=pump_detunings,
        reference_detuning=_get_number(thermalize_sec, "reference_detuning", 1.0, "thermalize", positive=True),
    )

    metrics_sec = _require_mapping(obj.get("metrics", {}), "metrics")
    _reject_unknown(metrics_sec, {"power_w", "tau_s", "wavelength_m", "waist_m"}, "metrics")
    metrics = MetricsSettings(
        power_w=_get_number(metrics_sec, "power_w", 20e-12, "metrics", positive=True),
        tau_s=_get_number(metrics_sec, "tau_s", 0.3e-6, "metrics", nonnegative=True),
        wavelength_m=_get_number(metrics_sec, "wavelength_m", 780e-9, "metrics", positive=True),
        waist_m=_get_number(metrics_sec, "waist_m", 100e-6, "metrics", positive=True),
    )

    oracle_sec = _require_mapping(obj.get("oracle", {}), "oracle")
    _reject_unknown(oracle_sec, {"delta_min", "delta_max", "n_points"}, "oracle")
    oracle = OracleSettings(
        delta_min=_get_number(oracle_sec, "delta_min", sweep.delta_min, "oracle"),
        delta_max=_get_number(oracle_sec, "delta_max", sweep.delta_max, "oracle"),
        n_points=_get_int(oracle_sec, "n_points", 481, "oracle", minimum=2),
    )
    if oracle.delta_min >= oracle.delta_max:
        raise ValidationError("oracle.delta_min: must be below oracle.delta_max")

    echo = {
        "units": "dimensionless",
        "grid": {"half_width": half_width, "edge_tolerance": edge_tolerance},
        "model": {
            "beta_re": params.beta.real,
            "beta_im": params.beta.imag,
            "n_atoms": params.n_atoms,
            "kappa": params.kappa,
            "gamma_pop": params.gamma_pop,
            "gamma_coh": params.gamma_coh,
            "a_in_re": params.a_in.real,
            "a_in_im": params.a_in.imag,
            "sigma_p": params.sigma_p,
            "omega_r": params.omega_r,
        },
        "solver": {
            "mode": solver.mode,
            "method": solver.method,
            "dt_initial": solver.dt_initial,
            "rel_tol": solver.rel_tol,
            "abs_tol": solver.abs_tol,
            "max_steps": solver.max_steps,
            "sample_interval": solver.sample_interval,
        },
        "sweep": {
            "delta_min": sweep.delta_min,
            "delta_max": sweep.delta_max,
            "rate": sweep.rate,
            "direction": sweep.direction,
        },
        "spectrum": {
            "delta_min": spectrum.delta_min,
            "delta_max": spectrum.delta_max,
            "n_points": spectrum.n_points,
            "steady_tol": spectrum.steady_tol,
            "window": spectrum.window,
            "max_windows": spectrum.max_windows,
        },
        "hysteresis": {
            "rates": list(hysteresis.rates),
            "delta_min": hysteresis.delta_min,
            "delta_max": hysteresis.delta_max,
            "threshold_rate": hysteresis.threshold_rate,
        },
        "power": {
            "a_in_values": list(power.a_in_values),
            "rate": power.rate,
            "delta_min": power.delta_min,
            "delta_max": power.delta_max,
        },
        "thermalize": {
            "strong_a_in": thermalize.strong_a_in,
            "weak_a_in": thermalize.weak_a_in,
            "t_strong": thermalize.t_strong,
            "t_weak": thermalize.t_weak,
            "delta": thermalize.delta,
            "n_samples": thermalize.n_samples,
            "pump_detunings": list(pump_detunings) if pump_detunings else None,
            "reference_detuning": thermalize.reference_detuning,
        },
        "metrics": {
            "power_w": metrics.power_w,
            "tau_s": metrics.tau_s,
            "wavelength_m": metrics.wavelength_m,
            "waist_m": metrics.waist_m,
        },
        "oracle": {
            "delta_min": oracle.delta_min,
            "delta_max": oracle.delta_max,
            "n_points": oracle.n_points,
        },
    }

    return RunConfig(
        grid=grid,
        edge_tolerance=edge_tolerance,
        params=params,
        solver=solver,
        sweep=sweep,
        spectrum=spectrum,
        hysteresis=hysteresis,
        power=power,
        thermalize=thermalize,
        metrics=metrics,
        oracle=oracle,
        echo=echo,
    )


def load_config(path) -> RunConfig:
    """Parse and validate a config (or manifest) file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return resolve_config(obj)
