"""Gain metrics, the closed-form weak-probe response, and curve fitting.

The closed-form response is the independent check for the sweep drivers: it
is evaluated straight from the steady-state algebra of the ladder equations
at a frozen thermal distribution, never through the time stepper.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from .errors import (
    DegenerateAbscissa,
    FitDegenerate,
    GridMismatch,
    NonPositiveData,
    ZeroProbeInput,
)
from .model import MomentumGrid, ModelParams, thermal_distribution

__all__ = [
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
]


@dataclass(frozen=True)
class FitResult:
    """Parameter estimates with OLS-style standard errors."""

    kind: str
    params: dict
    stderr: dict
    residual_rms: float
    n_points: int

    def __post_init__(self):
        if not np.isfinite(self.residual_rms):
            raise ValueError("residual RMS must be finite")
        for name, value in self.stderr.items():
            if value < 0:
                raise ValueError(f"standard error for {name!r} is negative")


@dataclass(frozen=True)
class SpectrumResult:
    """Sampled gain spectrum from one sweep (or one static/oracle scan).

    ``direction`` is the chirp sign (+1/-1), or 0 for direction-free scans.
    ``flat`` marks a featureless spectrum (zero coupling); its peak is then
    reported at the first grid point by convention.
    """

    delta: np.ndarray
    gain: np.ndarray
    a2: np.ndarray
    t: np.ndarray
    direction: int
    rate: float
    peak_gain: float
    peak_delta: float
    flat: bool = False
    diagnostics: object = None

    def __post_init__(self):
        object.__setattr__(self, "delta", np.asarray(self.delta, dtype=np.float64))
        object.__setattr__(self, "gain", np.asarray(self.gain, dtype=np.float64))
        if not np.all(np.isfinite(self.gain)) or np.any(self.gain < 0):
            raise ValueError("gain must be finite and non-negative")
        d = np.diff(self.delta)
        if self.direction >= 0:
            if np.any(d <= 0):
                raise ValueError("delta grid must increase for direction >= 0")
        elif np.any(d >= 0):
            raise ValueError("delta grid must decrease for direction -1")


@dataclass(frozen=True)
class HysteresisPoint:
    """Peak-gain comparison of the two chirp directions at one scan rate."""

    rate: float
    g_minus: float
    g_plus: float
    ratio: float
    peak_shift: float

    def __post_init__(self):
        if self.g_minus <= 0 or self.g_plus <= 0:
            raise ValueError("peak gains must be > 0")


@dataclass(frozen=True)
class OracleSpectrum:
    """Closed-form weak-probe response on a detuning grid."""

    delta: np.ndarray
    response: np.ndarray
    a2: np.ndarray
    gain: np.ndarray


def gain_of(a2: complex, a_in: complex) -> float:
    """Transmitted intensity gain |a2/a_in|^2.

    This ratio is the single gain observable everywhere in the package.  An
    absorption-coefficient description of the same transmission,
    exp(-2 Re[alpha] L) through a medium of length L, expresses the identical
    number; only the ratio form is computed.
    """
    if a_in == 0:
        raise ZeroProbeInput("gain is undefined for zero probe input")
    return float(abs(a2 / a_in) ** 2)


def linear_response_spectrum(
    grid: MomentumGrid, params: ModelParams, deltas: np.ndarray
) -> OracleSpectrum:
    """Steady probe response with populations frozen at the thermal state.

    For each detuning the coherences take their stationary value and the
    probe follows from its own stationary condition:

        S(delta)  = sum_q (Pi_q+1 - Pi_q) / (-4 w_r (2q+1) - delta - i gamma_coh)
        a2(delta) = (kappa/2) a_in / (kappa/2 - i N |beta|^2 S)

    This is evaluated directly from the closed form, independent of the
    integrator.
    """
    if params.gamma_coh <= 0:
        raise ValueError("the closed-form response requires gamma_coh > 0")
    deltas = np.atleast_1d(np.asarray(deltas, dtype=np.float64))
    pi_th = thermal_distribution(grid, params.sigma_p)
    num = np.diff(pi_th)
    q = grid.coherence_momenta.astype(np.float64)
    omega = -4.0 * params.omega_r * (2.0 * q + 1.0)
    den = omega[None, :] - deltas[:, None] - 1j * params.gamma_coh
    response = (num[None, :] / den).sum(axis=1)
    half_kappa = 0.5 * params.kappa
    a2 = half_kappa * params.a_in / (half_kappa - 1j * params.n_atoms * abs(params.beta) ** 2 * response)
    if params.a_in == 0:
        gain = np.ones_like(deltas)
    else:
        gain = np.abs(a2 / params.a_in) ** 2
    return OracleSpectrum(deltas, response, a2, gain)


def refine_peak(delta: np.ndarray, gain: np.ndarray) -> tuple[float, float, bool]:
    """Locate the gain maximum with 3-point parabolic refinement in log-gain.

    Ties break toward the detuning of smaller magnitude.  A featureless
    spectrum is flagged flat and reported at the first grid point.  Returns
    ``(peak_gain, peak_delta, flat)``.
    """
    delta = np.asarray(delta, dtype=np.float64)
    gain = np.asarray(gain, dtype=np.float64)
    gmax = gain.max()
    if gmax - gain.min() <= 1e-12 * max(1.0, abs(gmax)):
        return float(gain[0]), float(delta[0]), True
    candidates = np.flatnonzero(gain == gmax)
    i = int(candidates[np.argmin(np.abs(delta[candidates]))])
    if i == 0 or i == gain.size - 1 or np.any(gain[i - 1 : i + 2] <= 0):
        return float(gain[i]), float(delta[i]), False
    lg = np.log(gain[i - 1 : i + 2])
    curvature = lg[0] - 2.0 * lg[1] + lg[2]
    if curvature >= 0:
        return float(gain[i]), float(delta[i]), False
    h = 0.5 * (lg[0] - lg[2]) / curvature
    step = 0.5 * (delta[i + 1] - delta[i - 1])
    peak_log = lg[1] - 0.25 * (lg[0] - lg[2]) * h
    return float(np.exp(peak_log)), float(delta[i] + h * step), False


def fit_exponential_relaxation(t: np.ndarray, y: np.ndarray) -> FitResult:
    """Least-squares fit of ``y(t) = y_inf + (y_0 - y_inf) exp(-t / tau)``.

    Seeded by a log-linearized slope estimate, refined by nonlinear least
    squares.  Raises :class:`FitDegenerate` when the transient amplitude is
    below 1e-9 relative or the refinement fails to converge.
    """
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if t.size != y.size:
        raise ValueError("t and y must have equal length")
    if t.size < 8:
        raise ValueError(f"need at least 8 points, got {t.size}")
    if np.any(np.diff(t) <= 0):
        raise ValueError("t must be strictly increasing")
    scale = max(np.max(np.abs(y)), 1e-300)
    amplitude_raw = float(np.max(y) - np.min(y))
    if amplitude_raw <= 1e-9 * scale:
        raise FitDegenerate(
            f"transient amplitude {amplitude_raw:.3e} is below the 1e-9 relative floor"
        )

    y_inf0 = float(y[-1])
    a0 = float(y[0] - y_inf0)
    span = t[-1] - t[0]
    tau0 = span / 3.0
    if a0 != 0.0:
        z = (y - y_inf0) / a0
        mask = z > 1e-12
        if mask.sum() >= 3:
            slope = np.polyfit(t[mask], np.log(z[mask]), 1)[0]
            if slope < 0:
                tau0 = min(max(-1.0 / slope, 1e-6 * span), 100.0 * span)

    def model(tt, y_inf, amp, tau):
        return y_inf + amp * np.exp(-tt / tau)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, pcov = curve_fit(
                model,
                t,
                y,
                p0=[y_inf0, a0, tau0],
                bounds=([-np.inf, -np.inf, 1e-12 * span], [np.inf, np.inf, np.inf]),
                maxfev=20000,
                xtol=1e-14,
                ftol=1e-14,
                gtol=1e-14,
            )
    except (RuntimeError, ValueError) as exc:
        raise FitDegenerate(f"exponential refinement did not converge: {exc}") from exc

    y_inf, amp, tau = (float(v) for v in popt)
    if not np.all(np.isfinite(popt)):
        raise FitDegenerate("exponential refinement produced non-finite parameters")
    perr = np.sqrt(np.clip(np.diag(pcov), 0.0, np.inf))
    perr = np.where(np.isfinite(perr), perr, np.inf)
    resid = y - model(t, *popt)
    rate = 1.0 / tau
    return FitResult(
        kind="exponential-relaxation",
        params={"y_inf": y_inf, "amplitude": amp, "tau": tau, "rate": rate},
        stderr={
            "y_inf": float(perr[0]),
            "amplitude": float(perr[1]),
            "tau": float(perr[2]),
            "rate": float(perr[2]) * rate**2,
        },
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        n_points=int(t.size),
    )


def fit_power_law(x: np.ndarray, y: np.ndarray) -> FitResult:
    """Ordinary least squares on (log x, log y); the slope is the exponent."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size:
        raise ValueError("x and y must have equal length")
    if x.size < 3:
        raise ValueError(f"need at least 3 points, got {x.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise NonPositiveData("power-law fitting requires strictly positive data")
    lx = np.log(x)
    ly = np.log(y)
    if np.ptp(lx) == 0.0:
        raise DegenerateAbscissa("all abscissa values are identical")
    mx = lx.mean()
    my = ly.mean()
    dx = lx - mx
    sxx = float(np.sum(dx * dx))
    slope = float(np.sum(dx * (ly - my)) / sxx)
    intercept = my - slope * mx
    resid = ly - (slope * lx + intercept)
    n = x.size
    dof = n - 2
    s2 = float(np.sum(resid**2) / dof) if dof > 0 else 0.0
    stderr_slope = float(np.sqrt(s2 / sxx))
    stderr_intercept = float(np.sqrt(s2 * (1.0 / n + mx * mx / sxx)))
    prefactor = float(np.exp(intercept))
    return FitResult(
        kind="power-law",
        params={"exponent": slope, "prefactor": prefactor},
        stderr={"exponent": stderr_slope, "prefactor": prefactor * stderr_intercept},
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        n_points=int(n),
    )


def hysteresis_ratio(spec_minus: SpectrumResult, spec_plus: SpectrumResult) -> HysteresisPoint:
    """Refined peak-gain ratio g-/g+ and peak-location shift of a sweep pair."""
    if spec_minus.delta.size != spec_plus.delta.size:
        raise GridMismatch("spectra have different grid sizes")
    lo = np.sort(spec_minus.delta)
    hi = np.sort(spec_plus.delta)
    span = max(abs(lo[-1] - lo[0]), 1.0)
    if not np.allclose(lo, hi, rtol=0.0, atol=1e-9 * span):
        raise GridMismatch("spectra do not share a detuning grid")
    return HysteresisPoint(
        rate=spec_minus.rate,
        g_minus=spec_minus.peak_gain,
        g_plus=spec_plus.peak_gain,
        ratio=spec_minus.peak_gain / spec_plus.peak_gain,
        peak_shift=spec_minus.peak_delta - spec_plus.peak_delta,
    )
