"""Compiled inner loops for the time stepper.

The state is packed into one complex vector: populations (real parts used),
then coherences, then — in full mode — the probe amplitude.  In adiabatic
mode the probe is replaced by its quasi-steady value at every stage
evaluation and carries no slot of its own.

The detuning is affine in time, ``delta(t) = delta0 + dslope * t``, which
covers both linear chirps and fixed-detuning runs (``dslope = 0``).

Everything here is written as plain Python loops and compiled with numba
when it is importable; without numba the same functions run uncompiled
(slow but identical arithmetic).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


# Dormand-Prince 5(4) tableau (the classic embedded pair).
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = (
    35.0 / 384.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


@njit(cache=True)
def rhs_full(y, delta, omega_r, beta, n_atoms, kappa, gamma_pop, gamma_coh, a_in, pi_th, half_width):
    n_pop = 2 * half_width + 1
    n_coh = 2 * half_width
    out = np.empty_like(y)
    a2 = y[n_pop + n_coh]
    drive = -1j * np.conj(beta) * a2
    for i in range(n_pop):
        em1 = y[n_pop + i - 1] if i >= 1 else 0.0j
        e0 = y[n_pop + i] if i < n_coh else 0.0j
        c = drive * (em1 - e0)
        out[i] = complex(2.0 * c.real - gamma_pop * (y[i].real - pi_th[i]), 0.0)
    pump = beta * np.conj(a2)
    s = 0.0j
    for j in range(n_coh):
        p = j - half_width
        phase = -4.0 * omega_r * (2.0 * p + 1.0)
        eta = y[n_pop + j]
        out[n_pop + j] = (
            1j * (phase - delta) * eta
            - gamma_coh * eta
            - 1j * pump * (y[j + 1].real - y[j].real)
        )
        s += np.conj(eta)
    out[n_pop + n_coh] = 1j * beta * n_atoms * s - 0.5 * kappa * (a2 - a_in)
    return out


@njit(cache=True)
def rhs_adiabatic(
    y, delta, omega_r, beta, n_atoms, kappa, gamma_pop, gamma_coh, a_in, pi_th, half_width
):
    n_pop = 2 * half_width + 1
    n_coh = 2 * half_width
    out = np.empty_like(y)
    s = 0.0j
    for j in range(n_coh):
        s += np.conj(y[n_pop + j])
    a2 = a_in + (2j * beta * n_atoms / kappa) * s
    drive = -1j * np.conj(beta) * a2
    for i in range(n_pop):
        em1 = y[n_pop + i - 1] if i >= 1 else 0.0j
        e0 = y[n_pop + i] if i < n_coh else 0.0j
        c = drive * (em1 - e0)
        out[i] = complex(2.0 * c.real - gamma_pop * (y[i].real - pi_th[i]), 0.0)
    pump = beta * np.conj(a2)
    for j in range(n_coh):
        p = j - half_width
        phase = -4.0 * omega_r * (2.0 * p + 1.0)
        eta = y[n_pop + j]
        out[n_pop + j] = (
            1j * (phase - delta) * eta
            - gamma_coh * eta
            - 1j * pump * (y[j + 1].real - y[j].real)
        )
    return out


def _make_steppers(rhs_fn):
    """Build (dp45_step, rk4_step) closed over one of the rhs kernels."""

    @njit(cache=True)
    def dp45(y, t, dt, delta0, dslope, omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw):
        k1 = rhs_fn(y, delta0 + dslope * t, omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw)
        y2 = y + dt * (_A21 * k1)
        k2 = rhs_fn(
            y2, delta0 + dslope * (t + _C2 * dt), omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw
        )
        y3 = y + dt * (_A31 * k1 + _A32 * k2)
        k3 = rhs_fn(
            y3, delta0 + dslope * (t + _C3 * dt), omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw
        )
        y4 = y + dt * (_A41 * k1 + _A42 * k2 + _A43 * k3)
        k4 = rhs_fn(
            y4, delta0 + dslope * (t + _C4 * dt), omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw
        )
        y5 = y + dt * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4)
        k5 = rhs_fn(
            y5, delta0 + dslope * (t + _C5 * dt), omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw
        )
        y6 = y + dt * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5)
        k6 = rhs_fn(
            y6, delta0 + dslope * (t + dt), omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw
        )
        y_new = y + dt * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = rhs_fn(
            y_new, delta0 + dslope * (t + dt), omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw
        )
        err = dt * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
        return y_new, err

    @njit(cache=True)
    def rk4(y, t, dt, delta0, dslope, omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw):
        k1 = rhs_fn(y, delta0 + dslope * t, omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw)
        k2 = rhs_fn(
            y + (0.5 * dt) * k1,
            delta0 + dslope * (t + 0.5 * dt),
            omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw,
        )
        k3 = rhs_fn(
            y + (0.5 * dt) * k2,
            delta0 + dslope * (t + 0.5 * dt),
            omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw,
        )
        k4 = rhs_fn(
            y + dt * k3,
            delta0 + dslope * (t + dt),
            omega_r, beta, n_atoms, kappa, gp, gc, a_in, pi_th, hw,
        )
        return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    return dp45, rk4


dp45_full, rk4_full = _make_steppers(rhs_full)
dp45_adiabatic, rk4_adiabatic = _make_steppers(rhs_adiabatic)
