"""Measurement-protocol drivers built on the integrator.

Each driver prepares the standard initial condition (thermal populations,
zero coherences, probe at its quasi-steady value), runs the schedule(s), and
reduces the trajectory to the observable of interest.  Drivers that loop
over independent parameter points can fan the points out over worker
processes; results are always merged in input order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import constants

from .analysis import (
    FitResult,
    HysteresisPoint,
    SpectrumResult,
    fit_exponential_relaxation,
    gain_of,
    hysteresis_ratio,
    linear_response_spectrum,
    refine_peak,
)
from .errors import (
    FitDegenerate,
    NonPositiveInput,
    SteadyStateNotReached,
    ZeroProbeInput,
)
from .integrator import (
    SolverOptions,
    integrate,
    integrate_fixed_detuning,
)
from .model import (
    ChirpSchedule,
    EnsembleState,
    MomentumGrid,
    ModelParams,
    adiabatic_probe,
    rhs,
)

__all__ = [
    "SwitchingMetrics",
    "ThermalizationResult",
    "PowerPoint",
    "initial_state",
    "chirped_sweep",
    "hysteresis_map",
    "power_sweep",
    "thermalization_protocol",
    "static_spectrum",
    "switching_metrics",
]


def initial_state(grid: MomentumGrid, params: ModelParams) -> EnsembleState:
    """Thermal populations, zero coherences, probe at its quasi-steady value."""
    zero_coh = np.zeros(grid.n_coherences, dtype=np.complex128)
    return EnsembleState.thermal(grid, params, a2=adiabatic_probe(zero_coh, params))


def _map_ordered(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _sweep_task(task):
    grid, params, schedule, opts = task
    return chirped_sweep(grid, params, schedule, opts)


def chirped_sweep(
    grid: MomentumGrid,
    params: ModelParams,
    schedule: ChirpSchedule,
    opts: SolverOptions = SolverOptions(),
) -> SpectrumResult:
    """Scan the detuning across the resonance and record the gain spectrum.

    The schedule must bracket zero detuning so the whole dispersive feature
    is crossed.
    """
    if params.a_in == 0:
        raise ZeroProbeInput("chirped sweep needs a nonzero probe input")
    lo = min(schedule.delta_start, schedule.delta_end)
    hi = max(schedule.delta_start, schedule.delta_end)
    if not (lo < 0.0 < hi):
        raise ValueError(
            f"schedule [{lo}, {hi}] does not bracket zero detuning; "
            "the resonance feature would be clipped"
        )
    state0 = initial_state(grid, params)
    traj = integrate(state0, params, schedule, opts)
    gain = np.abs(traj.a2 / params.a_in) ** 2
    peak_gain, peak_delta, flat = refine_peak(traj.delta, gain)
    return SpectrumResult(
        delta=traj.delta,
        gain=gain,
        a2=traj.a2,
        t=traj.t,
        direction=schedule.direction,
        rate=schedule.rate,
        peak_gain=peak_gain,
        peak_delta=peak_delta,
        flat=flat,
        diagnostics=traj.diagnostics,
    )


def hysteresis_map(
    grid: MomentumGrid,
    params: ModelParams,
    rates,
    delta_lo: float,
    delta_hi: float,
    opts: SolverOptions = SolverOptions(),
    jobs: int = 1,
) -> list[HysteresisPoint]:
    """Peak-gain ratio g-/g+ for each scan rate (rates sorted ascending).

    Both chirp directions start from the identical thermal initial
    condition and cover [delta_lo, delta_hi].
    """
    rates = list(rates)
    if any(b <= a for a, b in zip(rates, rates[1:])):
        raise ValueError("rates must be sorted strictly ascending")
    tasks = []
    for rate in rates:
        tasks.append((grid, params, ChirpSchedule.between(delta_hi, delta_lo, rate), opts))
        tasks.append((grid, params, ChirpSchedule.between(delta_lo, delta_hi, rate), opts))
    spectra = _map_ordered(_sweep_task, tasks, jobs)
    points = []
    for k in range(len(rates)):
        points.append(hysteresis_ratio(spectra[2 * k], spectra[2 * k + 1]))
    return points


@dataclass(frozen=True)
class PowerPoint:
    """Hysteresis ratio at one probe input power (|a_in|^2)."""

    power: float
    g_minus: float
    g_plus: float
    ratio: float


def power_sweep(
    grid: MomentumGrid,
    params: ModelParams,
    a_in_values,
    schedule_minus: ChirpSchedule,
    schedule_plus: ChirpSchedule,
    opts: SolverOptions = SolverOptions(),
    jobs: int = 1,
) -> list[PowerPoint]:
    """Hysteresis ratio as a function of probe input power."""
    values = [complex(a) for a in a_in_values]
    if any(abs(a) == 0 for a in values):
        raise ZeroProbeInput("probe input grid must not contain zero")
    tasks = []
    for a in values:
        pa = replace(params, a_in=a)
        tasks.append((grid, pa, schedule_minus, opts))
        tasks.append((grid, pa, schedule_plus, opts))
    spectra = _map_ordered(_sweep_task, tasks, jobs)
    points = []
    for k, a in enumerate(values):
        point = hysteresis_ratio(spectra[2 * k], spectra[2 * k + 1])
        points.append(
            PowerPoint(power=abs(a) ** 2, g_minus=point.g_minus, g_plus=point.g_plus, ratio=point.ratio)
        )
    return points


@dataclass(frozen=True)
class ThermalizationResult:
    """Gain-recovery record after the strong probe phase, plus the fitted rate."""

    t: np.ndarray
    gain: np.ndarray
    fit: FitResult
    delta: float
    t_strong: float

    @property
    def rate_estimate(self) -> float:
        return self.fit.params["rate"]

    @property
    def rate_stderr(self) -> float:
        return self.fit.stderr["rate"]


def find_gain_peak_detuning(
    grid: MomentumGrid, params: ModelParams, n_points: int = 2001
) -> float:
    """Detuning of maximum weak-probe gain, from the closed-form response."""
    lo = -(16.0 * params.sigma_p + 8.0 * params.gamma_coh + 24.0) * params.omega_r
    deltas = np.linspace(lo, 2.0, n_points)
    oracle = linear_response_spectrum(grid, params, deltas)
    _, peak_delta, _ = refine_peak(deltas, oracle.gain)
    return peak_delta


def thermalization_protocol(
    grid: MomentumGrid,
    params: ModelParams,
    strong_a_in: float,
    weak_a_in: float,
    t_strong: float | None = None,
    opts: SolverOptions = SolverOptions(),
    delta: float | None = None,
    t_weak: float | None = None,
    fit_skip: float | None = None,
    n_samples: int = 600,
) -> ThermalizationResult:
    """Two-phase drive at the gain peak; the recovery rate estimates gamma_pop.

    Phase 1 holds a strong probe until the momentum distribution is depleted
    to its driven steady state; phase 2 drops the probe and follows the gain
    as the distribution rethermalizes.  The early part of phase 2 (the
    coherence transient) is excluded from the exponential fit.
    """
    strong = float(strong_a_in)
    weak = float(weak_a_in)
    if weak <= 0 or strong <= 0:
        raise ZeroProbeInput("probe amplitudes must be > 0")
    if strong < weak:
        raise ValueError("strong_a_in must be >= weak_a_in")
    if strong - weak <= 1e-12 * strong:
        raise FitDegenerate(
            "no intensity step between the phases; the gain transient is flat "
            "and carries no thermalization signal"
        )
    if params.gamma_pop <= 0:
        raise ValueError("thermalization requires gamma_pop > 0")

    if delta is None:
        delta = find_gain_peak_detuning(grid, params)
    if t_strong is None:
        t_strong = 50.0 / params.gamma_pop
    if t_weak is None:
        t_weak = 8.0 / params.gamma_pop
    if fit_skip is None:
        fit_skip = 8.0 / params.gamma_coh if params.gamma_coh > 0 else 0.0
        fit_skip = min(fit_skip, 0.25 * t_weak)

    params_strong = replace(params, a_in=strong + 0.0j)
    phase1 = integrate_fixed_detuning(
        initial_state(grid, params_strong), params_strong, delta, t_strong, opts, n_samples=2
    )

    params_weak = replace(params, a_in=weak + 0.0j)
    depleted = phase1.final_state
    state2 = EnsembleState(
        depleted.populations,
        depleted.coherences,
        adiabatic_probe(depleted.coherences, params_weak),
    )
    phase2 = integrate_fixed_detuning(
        state2, params_weak, delta, t_weak, opts, n_samples=n_samples
    )
    gain = np.abs(phase2.a2 / params_weak.a_in) ** 2

    mask = phase2.t >= fit_skip
    if mask.sum() < 8:
        mask = np.ones_like(mask)
    fit = fit_exponential_relaxation(phase2.t[mask], gain[mask])
    return ThermalizationResult(
        t=phase2.t, gain=gain, fit=fit, delta=float(delta), t_strong=float(t_strong)
    )


def _population_drift(state: EnsembleState, params: ModelParams, delta: float) -> float:
    """Largest instantaneous population derivative, evaluated exactly.

    The momentum distribution is the slow channel behind the steady gain (the
    coherences and the probe follow it within 1/gamma_coh), and unlike the
    recorded gain it is insensitive to the solver's roundoff dust on the
    far-detuned coherences.  One right-hand-side evaluation, no re-integration
    noise.
    """
    a2 = adiabatic_probe(state.coherences, params)
    probed = EnsembleState(state.populations, state.coherences, a2)
    deriv = rhs(probed, params, delta)
    return float(np.max(np.abs(deriv.populations)))


def _static_task(task):
    grid, params, delta, opts, steady_tol, window, max_windows = task
    if params.a_in == 0:
        raise ZeroProbeInput("static spectrum needs a nonzero probe input")
    state = initial_state(grid, params)
    elapsed = 0.0
    settled_streak = 0
    for _ in range(max_windows):
        traj = integrate_fixed_detuning(state, params, delta, window, opts, n_samples=2)
        state = traj.final_state
        elapsed += window
        # projected population change over one more window; total population
        # is one, so the scale is absolute
        drift = _population_drift(state, params, delta) * window
        if drift <= steady_tol:
            settled_streak += 1
            if settled_streak >= 2:
                return gain_of(state.a2, params.a_in), state.a2, elapsed
        else:
            settled_streak = 0
    raise SteadyStateNotReached(
        f"gain at delta = {delta:.6g} did not settle within {max_windows} windows "
        f"of {window:.6g} time units"
    )


def static_spectrum(
    grid: MomentumGrid,
    params: ModelParams,
    deltas,
    opts: SolverOptions = SolverOptions(),
    steady_tol: float = 1e-9,
    window: float | None = None,
    max_windows: int = 64,
    jobs: int = 1,
) -> SpectrumResult:
    """Steady-state gain at each detuning, integrated point by point.

    Convergence requires the projected population change over one settling
    window (largest instantaneous population derivative times the window) to
    stay below ``steady_tol`` for two consecutive windows; the relative gain
    change per window is then bounded at the same order.  Points are
    independent and may run in parallel; results keep the input order.
    """
    deltas = np.asarray(deltas, dtype=np.float64)
    if deltas.ndim != 1 or deltas.size < 1:
        raise ValueError("deltas must be a non-empty 1-d array")
    if np.any(np.diff(deltas) <= 0):
        raise ValueError("deltas must be strictly increasing")
    if window is None:
        rates = [r for r in (params.gamma_pop, params.gamma_coh) if r > 0]
        window = 6.0 / min(rates) if rates else 50.0
    tasks = [(grid, params, float(d), opts, steady_tol, window, max_windows) for d in deltas]
    results = _map_ordered(_static_task, tasks, jobs)
    gain = np.array([r[0] for r in results])
    a2 = np.array([r[1] for r in results], dtype=np.complex128)
    settle = np.array([r[2] for r in results])
    peak_gain, peak_delta, flat = refine_peak(deltas, gain)
    return SpectrumResult(
        delta=deltas,
        gain=gain,
        a2=a2,
        t=settle,
        direction=0,
        rate=0.0,
        peak_gain=peak_gain,
        peak_delta=peak_delta,
        flat=flat,
    )


@dataclass(frozen=True)
class SwitchingMetrics:
    """Photon budget of one switching event."""

    photon_number: float
    photons_per_diffraction_area: float


def switching_metrics(
    power_w: float, tau_s: float, wavelength_m: float, waist_m: float
) -> SwitchingMetrics:
    """Photon number tau*P/(h c / lambda) and its density per lambda^2/(2 pi).

    ``tau_s`` may be zero (zero photons); the remaining inputs must be
    strictly positive.
    """
    if power_w <= 0:
        raise NonPositiveInput(f"power must be > 0, got {power_w}")
    if wavelength_m <= 0:
        raise NonPositiveInput(f"wavelength must be > 0, got {wavelength_m}")
    if waist_m <= 0:
        raise NonPositiveInput(f"waist must be > 0, got {waist_m}")
    if tau_s < 0:
        raise NonPositiveInput(f"switching time must be >= 0, got {tau_s}")
    photon_energy = constants.h * constants.c / wavelength_m
    photon_number = tau_s * power_w / photon_energy
    diffraction_area = wavelength_m**2 / (2.0 * np.pi)
    beam_area = np.pi * waist_m**2
    return SwitchingMetrics(
        photon_number=photon_number,
        photons_per_diffraction_area=photon_number * diffraction_area / beam_area,
    )
