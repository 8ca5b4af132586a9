"""Shared instruments for the test suite.

The parameter bundles below are the calibrated operating points used across
the tests: a strong-coupling configuration with a clear sweep-direction
asymmetry, a weak-probe configuration whose response stays linear, and small
fast instruments for the thermalization and mode-equivalence checks.
"""

from __future__ import annotations

from pathlib import Path

import pytest

import rirsim as rs

REPO_ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the stepping kernels once so timed tests measure physics only."""
    grid = rs.MomentumGrid(2)
    params = rs.ModelParams(
        beta=0.1, n_atoms=1.0, kappa=10.0, gamma_pop=0.1, gamma_coh=1.0, a_in=1.0, sigma_p=0.3
    )
    state = rs.initial_state(grid, params)
    for mode in ("adiabatic-probe", "full-stiff"):
        for method in ("adaptive-embedded", "fixed-rk4"):
            opts = rs.SolverOptions(mode=mode, method=method, dt_initial=0.05)
            rs.integrate_fixed_detuning(state, params, 0.0, 0.5, opts, n_samples=2)


@pytest.fixture(scope="session")
def strong_params():
    """Calibrated strong-coupling operating point (matches configs/strong_sweep.json)."""
    return rs.ModelParams(
        beta=0.35,
        n_atoms=1.93e6,
        kappa=1e5,
        gamma_pop=0.04,
        gamma_coh=1.0,
        a_in=0.5,
        sigma_p=1.0,
    )


@pytest.fixture(scope="session")
def weak_params():
    """Weak-probe configuration: measurable gain, negligible back-action."""
    return rs.ModelParams(
        beta=0.35,
        n_atoms=7.5e5,
        kappa=1e5,
        gamma_pop=0.3,
        gamma_coh=1.0,
        a_in=1e-3,
        sigma_p=1.0,
    )


@pytest.fixture(scope="session")
def grid16():
    return rs.MomentumGrid(16)


@pytest.fixture(scope="session")
def grid32():
    return rs.MomentumGrid(32)


@pytest.fixture(scope="session")
def grid64():
    return rs.MomentumGrid(64)


def strong_sweep_pair(grid, params, rate, delta_lo=-45.0, delta_hi=2.0, opts=None):
    opts = opts or rs.SolverOptions()
    minus = rs.chirped_sweep(grid, params, rs.ChirpSchedule.between(delta_hi, delta_lo, rate), opts)
    plus = rs.chirped_sweep(grid, params, rs.ChirpSchedule.between(delta_lo, delta_hi, rate), opts)
    return minus, plus
