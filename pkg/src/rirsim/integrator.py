"""Time stepping of the ladder equations through a detuning schedule.

Two solver modes:

* ``full-stiff`` integrates the probe amplitude as an ODE alongside the
  matter variables.  Usable for artificially small probe decay rates and for
  the mode-equivalence check.
* ``adiabatic-probe`` (default) replaces the probe by its quasi-steady value
  at every stage evaluation; the physical probe decay is orders of magnitude
  faster than every other rate, so this removes the stiffness at no cost.

The adaptive method is an embedded Dormand-Prince 5(4) pair with PI step
control; a classical fixed-step RK4 is kept for convergence checks.  Samples
are taken on a uniform grid (uniform in detuning for chirped runs); the
adaptive stepper lands exactly on sample times so recorded values carry full
solver accuracy, and linear in-step interpolation remains only for the
fixed-step method.

Frame convention: the coherences are defined in the frame rotated at the
instantaneous detuning, so a chirped ``delta(t)`` enters the coherence
equation algebraically.  The alternative convention, rotating by the
accumulated phase integral of ``delta``, would add a time-dependent phase to
the drive term; it is not implemented.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    NonFiniteState,
    StepLimitExceeded,
    StepUnderflow,
)
from .model import (
    ChirpSchedule,
    EnsembleState,
    ModelParams,
    adiabatic_probe,
    rhs,
    thermal_distribution,
)

__all__ = [
    "SolverOptions",
    "SolverDiagnostics",
    "Trajectory",
    "integrate",
    "integrate_fixed_detuning",
    "step_fixed",
    "NegativePopulationWarning",
]

_MODES = ("adiabatic-probe", "full-stiff")
_METHODS = ("adaptive-embedded", "fixed-rk4")

# step-control constants (Hairer PI controller for a 5(4) pair)
_SAFETY = 0.9
_ALPHA = 0.14
_BETA = 0.08
_FAC_MIN = 0.2
_FAC_MAX = 6.0

NEGATIVE_POPULATION_TOLERANCE = -1e-3


class NegativePopulationWarning(UserWarning):
    """Transient negative populations beyond the benign roundoff scale."""


@dataclass(frozen=True)
class SolverOptions:
    mode: str = "adiabatic-probe"
    method: str = "adaptive-embedded"
    dt_initial: float = 1e-3
    rel_tol: float = 1e-8
    abs_tol: float = 1e-11
    max_steps: int = 10_000_000
    sample_interval: float = 0.25

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        for name in ("dt_initial", "rel_tol", "abs_tol", "sample_interval"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True)
class SolverDiagnostics:
    steps_accepted: int
    steps_rejected: int
    rhs_evaluations: int
    min_population: float


@dataclass(frozen=True)
class Trajectory:
    """Reduced samples of one integration plus solver diagnostics.

    ``t`` is strictly increasing; ``delta[i]`` equals the schedule evaluated
    at ``t[i]`` exactly.
    """

    t: np.ndarray
    delta: np.ndarray
    a2: np.ndarray
    total_population: np.ndarray
    min_population: np.ndarray
    diagnostics: SolverDiagnostics
    final_state: EnsembleState


def _pack(state: EnsembleState, adiabatic: bool) -> np.ndarray:
    n_pop = state.populations.size
    n_coh = state.coherences.size
    n = n_pop + n_coh + (0 if adiabatic else 1)
    y = np.empty(n, dtype=np.complex128)
    y[:n_pop] = state.populations
    y[n_pop : n_pop + n_coh] = state.coherences
    if not adiabatic:
        y[-1] = state.a2
    return y


def _unpack(y: np.ndarray, n_pop: int, n_coh: int, params: ModelParams, adiabatic: bool) -> EnsembleState:
    pops = y[:n_pop].real.copy()
    cohs = y[n_pop : n_pop + n_coh].copy()
    if adiabatic:
        a2 = adiabatic_probe(cohs, params)
    else:
        a2 = complex(y[-1])
    return EnsembleState(pops, cohs, a2)


def _probe_of(y: np.ndarray, n_pop: int, n_coh: int, params: ModelParams, adiabatic: bool) -> complex:
    if adiabatic:
        s = np.sum(np.conj(y[n_pop : n_pop + n_coh]))
        return complex(params.a_in + (2j * params.beta * params.n_atoms / params.kappa) * s)
    return complex(y[-1])


def _run(
    state0: EnsembleState,
    params: ModelParams,
    delta0: float,
    dslope: float,
    t_end: float,
    sample_t: np.ndarray,
    opts: SolverOptions,
) -> Trajectory:
    if t_end <= 0:
        raise ValueError(f"integration span must be > 0, got {t_end}")
    grid = state0.grid
    pi_th = thermal_distribution(grid, params.sigma_p)
    adiabatic = opts.mode == "adiabatic-probe"
    hw = grid.half_width
    n_pop, n_coh = grid.n_populations, grid.n_coherences

    if adiabatic:
        step_adaptive, step_rk4 = _kernels.dp45_adiabatic, _kernels.rk4_adiabatic
    else:
        step_adaptive, step_rk4 = _kernels.dp45_full, _kernels.rk4_full
    args = (
        float(params.omega_r),
        complex(params.beta),
        float(params.n_atoms),
        float(params.kappa),
        float(params.gamma_pop),
        float(params.gamma_coh),
        complex(params.a_in),
        pi_th,
        hw,
    )

    y = _pack(state0, adiabatic)
    n_samples = sample_t.size
    rec_a2 = np.empty(n_samples, dtype=np.complex128)
    rec_sum = np.empty(n_samples, dtype=np.float64)
    rec_min = np.empty(n_samples, dtype=np.float64)

    def record(idx: int, yv: np.ndarray) -> None:
        pops = yv[:n_pop].real
        rec_a2[idx] = _probe_of(yv, n_pop, n_coh, params, adiabatic)
        rec_sum[idx] = pops.sum()
        rec_min[idx] = pops.min()

    record(0, y)
    next_idx = 1

    t = 0.0
    dt = min(opts.dt_initial, t_end)
    dt_floor = max(1e-14, 1e-12 * t_end)
    err_prev = 1.0
    n_accept = 0
    n_reject = 0
    nfev = 0
    min_pop = float(y[:n_pop].real.min())
    adaptive = opts.method == "adaptive-embedded"
    end_tol = 1e-12 * t_end

    while t < t_end - end_tol:
        if n_accept + n_reject >= opts.max_steps:
            raise StepLimitExceeded(
                f"no convergence within {opts.max_steps} steps (t = {t:.6g} of {t_end:.6g})"
            )
        if dt < dt_floor:
            raise StepUnderflow(
                f"step size {dt:.3e} fell below the floor {dt_floor:.3e} at t = {t:.6g}; "
                "the problem is stiffer than the solver configuration allows"
            )
        # In adaptive mode, land exactly on the next sample time so recorded
        # samples carry full solver accuracy; interpolation below is then a
        # fallback for the fixed-step method only.
        if adaptive:
            t_target = sample_t[next_idx] if next_idx < n_samples else t_end
        else:
            t_target = t_end
        clipped = min(dt, t_target - t)

        if adaptive:
            y_new, err_vec = step_adaptive(y, t, clipped, delta0, dslope, *args)
            nfev += 7
            scale = opts.abs_tol + opts.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2)))
            if err > 1.0:
                n_reject += 1
                dt = clipped * min(1.0, max(_FAC_MIN, _SAFETY * err**-0.2))
                continue
            factor = _FAC_MAX if err == 0.0 else min(
                _FAC_MAX, max(_FAC_MIN, _SAFETY * err**-_ALPHA * err_prev**_BETA)
            )
            err_prev = max(err, 1e-4)
        else:
            y_new = step_rk4(y, t, clipped, delta0, dslope, *args)
            nfev += 4
            factor = 1.0

        if not np.all(np.isfinite(y_new)):
            raise NonFiniteState(f"non-finite state at t = {t + clipped:.6g}")

        t_new = t + clipped
        while next_idx < n_samples and sample_t[next_idx] <= t_new + end_tol:
            theta = (sample_t[next_idx] - t) / clipped
            if theta >= 1.0 - 1e-12:
                record(next_idx, y_new)
            else:
                record(next_idx, y + theta * (y_new - y))
            next_idx += 1

        m = float(y_new[:n_pop].real.min())
        if m < min_pop:
            min_pop = m
        y = y_new
        t = t_new
        n_accept += 1
        if clipped < dt:
            # boundary-clamped step: keep the controller's larger proposal
            dt = min(max(dt, clipped * factor), t_end)
        else:
            dt = min(clipped * factor, t_end)

    while next_idx < n_samples:
        record(next_idx, y)
        next_idx += 1

    if min_pop < NEGATIVE_POPULATION_TOLERANCE:
        warnings.warn(
            f"population went negative down to {min_pop:.3e}; the first-order "
            "coherence truncation is being pushed hard",
            NegativePopulationWarning,
            stacklevel=3,
        )

    return Trajectory(
        t=sample_t,
        delta=delta0 + dslope * sample_t,
        a2=rec_a2,
        total_population=rec_sum,
        min_population=rec_min,
        diagnostics=SolverDiagnostics(n_accept, n_reject, nfev, min_pop),
        final_state=_unpack(y, n_pop, n_coh, params, adiabatic),
    )


def integrate(
    state0: EnsembleState,
    params: ModelParams,
    schedule: ChirpSchedule,
    opts: SolverOptions = SolverOptions(),
) -> Trajectory:
    """Integrate through a chirp, sampling on a uniform detuning grid.

    ``opts.sample_interval`` is the target detuning spacing; both schedule
    endpoints are always included.
    """
    span = abs(schedule.delta_end - schedule.delta_start)
    n_intervals = max(1, round(span / opts.sample_interval))
    sample_t = np.linspace(0.0, schedule.duration, n_intervals + 1)
    return _run(
        state0,
        params,
        schedule.delta_start,
        schedule.slope,
        schedule.duration,
        sample_t,
        opts,
    )


def integrate_fixed_detuning(
    state0: EnsembleState,
    params: ModelParams,
    delta: float,
    duration: float,
    opts: SolverOptions = SolverOptions(),
    n_samples: int | None = None,
) -> Trajectory:
    """Integrate at constant detuning, sampling uniformly in time.

    ``opts.sample_interval`` is read as a time spacing here; ``n_samples``
    overrides it with an explicit sample count (endpoints included).
    """
    if n_samples is None:
        n_intervals = max(1, round(duration / opts.sample_interval))
    else:
        if n_samples < 2:
            raise ValueError("n_samples must be >= 2")
        n_intervals = n_samples - 1
    sample_t = np.linspace(0.0, duration, n_intervals + 1)
    return _run(state0, params, float(delta), 0.0, duration, sample_t, opts)


def step_fixed(
    state: EnsembleState,
    params: ModelParams,
    delta_of_t,
    t: float,
    dt: float,
) -> EnsembleState:
    """One classical RK4 step of the full system (probe integrated as an ODE).

    ``delta_of_t`` is a callable evaluated at the stage times, or a constant.
    Reference implementation over the plain-numpy right-hand side.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if not callable(delta_of_t):
        delta_value = float(delta_of_t)

        def delta_of_t(_t, _d=delta_value):
            return _d

    pi_th = thermal_distribution(state.grid, params.sigma_p)

    def f(s: EnsembleState, ts: float) -> EnsembleState:
        return rhs(s, params, delta_of_t(ts), pi_th=pi_th)

    def add(s: EnsembleState, d: EnsembleState, h: float) -> EnsembleState:
        return EnsembleState(
            s.populations + h * d.populations,
            s.coherences + h * d.coherences,
            s.a2 + h * d.a2,
        )

    k1 = f(state, t)
    k2 = f(add(state, k1, dt / 2.0), t + dt / 2.0)
    k3 = f(add(state, k2, dt / 2.0), t + dt / 2.0)
    k4 = f(add(state, k3, dt), t + dt)
    if not np.all(np.isfinite(k4.populations)) or not np.all(np.isfinite(k4.coherences)):
        raise NonFiniteState("non-finite derivative inside RK4 stages")
    pops = state.populations + (dt / 6.0) * (
        k1.populations + 2.0 * k2.populations + 2.0 * k3.populations + k4.populations
    )
    cohs = state.coherences + (dt / 6.0) * (
        k1.coherences + 2.0 * k2.coherences + 2.0 * k3.coherences + k4.coherences
    )
    a2 = state.a2 + (dt / 6.0) * (k1.a2 + 2.0 * k2.a2 + 2.0 * k3.a2 + k4.a2)
    out = EnsembleState(pops, cohs, a2)
    if not np.all(np.isfinite(pops)) or not np.all(np.isfinite(cohs)):
        raise NonFiniteState("non-finite state after RK4 step")
    return out
