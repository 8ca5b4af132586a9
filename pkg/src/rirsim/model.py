"""Dimensionless data model and the right-hand side of the ladder equations.

The recoil angular frequency fixes the time unit (``omega_r = 1`` in every
default configuration), so all rates and detunings below are pure numbers.
Momentum classes are labelled by an integer ``p``; each ladder step transfers
one two-photon recoil.  The dynamical variables are

* ``populations[i]``  -- occupation of momentum class ``p = i - P``,
* ``coherences[j]``   -- first-order coherence between classes ``p`` and
  ``p + 1`` with ``p = j - P`` (already rotated at the instantaneous
  two-photon detuning),
* ``a2``              -- complex probe amplitude.

Coherences outside the grid are identically zero; that edge convention makes
the population coupling telescope, so the total population is conserved
whenever the thermal reference is normalized.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    EdgePopulationTooLarge,
    ShapeMismatch,
    ZeroDetuning,
)

__all__ = [
    "MomentumGrid",
    "ModelParams",
    "EnsembleState",
    "ChirpSchedule",
    "thermal_distribution",
    "rhs",
    "adiabatic_probe",
    "scaled_rates",
    "cooperativity",
]


class ConfigurationWarning(UserWarning):
    """Parameter combination that is legal but outside the usual regime."""


@dataclass(frozen=True)
class MomentumGrid:
    """Symmetric ladder of momentum classes ``p = -P .. +P``.

    ``half_width`` is ``P``.  Populations live on all ``2P + 1`` classes,
    coherences on the ``2P`` nearest-neighbour pairs (index ``p = -P .. P-1``).
    """

    half_width: int

    def __post_init__(self):
        if not isinstance(self.half_width, (int, np.integer)) or self.half_width < 1:
            raise ValueError(f"half_width must be an integer >= 1, got {self.half_width!r}")

    @property
    def n_populations(self) -> int:
        return 2 * self.half_width + 1

    @property
    def n_coherences(self) -> int:
        return 2 * self.half_width

    @property
    def momenta(self) -> np.ndarray:
        """Integer momentum labels of the population classes."""
        return np.arange(-self.half_width, self.half_width + 1)

    @property
    def coherence_momenta(self) -> np.ndarray:
        """Lower momentum label ``p`` of each coherence (pair ``p``, ``p+1``)."""
        return np.arange(-self.half_width, self.half_width)


@dataclass(frozen=True)
class ModelParams:
    """All rates and couplings of the ladder equations, in recoil units.

    ``beta`` is the two-photon coupling: one complex number absorbing the two
    single-photon coupling strengths, the pump amplitude, and the inverse
    single-photon detuning of the eliminated excited state.  ``n_atoms`` is
    the effective collective number multiplying the matter term in the probe
    equation, ``kappa`` the probe decay rate, and ``a_in`` the input probe
    amplitude.  ``sigma_p`` is the r.m.s. width of the thermal momentum
    distribution in ladder-step units.
    """

    beta: complex
    n_atoms: float
    kappa: float
    gamma_pop: float
    gamma_coh: float
    a_in: complex
    sigma_p: float
    omega_r: float = 1.0

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if self.gamma_pop < 0:
            raise ValueError(f"gamma_pop must be >= 0, got {self.gamma_pop}")
        if self.gamma_coh < 0:
            raise ValueError(f"gamma_coh must be >= 0, got {self.gamma_coh}")
        if self.sigma_p <= 0:
            raise ValueError(f"sigma_p must be > 0, got {self.sigma_p}")
        if self.omega_r <= 0:
            raise ValueError(f"omega_r must be > 0, got {self.omega_r}")
        if self.n_atoms < 0:
            raise ValueError(f"n_atoms must be >= 0, got {self.n_atoms}")
        if self.gamma_coh < self.gamma_pop:
            warnings.warn(
                "gamma_coh < gamma_pop: coherences outliving the momentum "
                "distribution is outside the regime this model targets",
                ConfigurationWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class EnsembleState:
    """Populations, coherences and probe amplitude at one instant.

    Also used as the derivative container returned by :func:`rhs` (the
    derivative has the same shape; its population part is real by
    construction).
    """

    populations: np.ndarray
    coherences: np.ndarray
    a2: complex

    def __post_init__(self):
        pops = np.asarray(self.populations, dtype=np.float64)
        cohs = np.asarray(self.coherences, dtype=np.complex128)
        object.__setattr__(self, "populations", pops)
        object.__setattr__(self, "coherences", cohs)
        object.__setattr__(self, "a2", complex(self.a2))
        if pops.ndim != 1 or cohs.ndim != 1:
            raise ShapeMismatch("populations and coherences must be 1-d arrays")
        if pops.size != cohs.size + 1:
            raise ShapeMismatch(
                f"got {pops.size} populations and {cohs.size} coherences; "
                "expected 2P+1 and 2P"
            )
        if pops.size % 2 != 1 or pops.size < 3:
            raise ShapeMismatch(f"population array length {pops.size} is not 2P+1 with P >= 1")

    @property
    def grid(self) -> MomentumGrid:
        return MomentumGrid((self.populations.size - 1) // 2)

    def conforms(self, grid: MomentumGrid) -> bool:
        return (
            self.populations.size == grid.n_populations
            and self.coherences.size == grid.n_coherences
        )

    def require_grid(self, grid: MomentumGrid) -> None:
        if not self.conforms(grid):
            raise ShapeMismatch(
                f"state has {self.populations.size} populations / "
                f"{self.coherences.size} coherences, grid wants "
                f"{grid.n_populations} / {grid.n_coherences}"
            )

    @classmethod
    def thermal(
        cls,
        grid: MomentumGrid,
        params: ModelParams,
        a2: complex = 0.0,
        edge_tolerance: float = 1e-8,
    ) -> "EnsembleState":
        """Thermal populations, zero coherences, probe at ``a2``."""
        pops = thermal_distribution(grid, params.sigma_p, edge_tolerance=edge_tolerance)
        return cls(pops, np.zeros(grid.n_coherences, dtype=np.complex128), a2)


@dataclass(frozen=True)
class ChirpSchedule:
    """Linear scan of the two-photon detuning.

    ``direction`` is the sign of d(delta)/dt; ``rate`` is its magnitude in
    recoil-frequency-squared units.
    """

    delta_start: float
    delta_end: float
    rate: float
    direction: int

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError(f"chirp rate must be > 0, got {self.rate}")
        if self.direction not in (-1, 1):
            raise ValueError(f"direction must be +1 or -1, got {self.direction}")
        span = self.delta_end - self.delta_start
        if span == 0:
            raise ValueError("delta_end must differ from delta_start")
        if np.sign(span) != self.direction:
            raise ValueError(
                f"direction {self.direction:+d} inconsistent with sweep "
                f"{self.delta_start} -> {self.delta_end}"
            )

    @classmethod
    def between(cls, delta_start: float, delta_end: float, rate: float) -> "ChirpSchedule":
        """Build a schedule with the direction inferred from the endpoints."""
        direction = 1 if delta_end > delta_start else -1
        return cls(delta_start, delta_end, rate, direction)

    @property
    def duration(self) -> float:
        return abs(self.delta_end - self.delta_start) / self.rate

    @property
    def slope(self) -> float:
        """Signed d(delta)/dt."""
        return self.direction * self.rate

    def delta_at(self, t) -> np.ndarray:
        return self.delta_start + self.slope * np.asarray(t)


def thermal_distribution(
    grid: MomentumGrid, sigma_p: float, edge_tolerance: float = 1e-8
) -> np.ndarray:
    """Discrete Maxwell-Boltzmann weights on the momentum ladder.

    Normalized by direct summation so the total is exactly one (up to
    roundoff); symmetric under p -> -p by construction.  Raises
    :class:`EdgePopulationTooLarge` when the grid is too small to hold the
    requested temperature.
    """
    if sigma_p <= 0:
        raise ValueError(f"sigma_p must be > 0, got {sigma_p}")
    p = grid.momenta.astype(np.float64)
    w = np.exp(-(p * p) / (2.0 * sigma_p * sigma_p))
    pi_th = w / np.sum(w)
    edge = max(pi_th[0], pi_th[-1])
    if edge > edge_tolerance:
        raise EdgePopulationTooLarge(
            f"thermal weight {edge:.3e} at |p| = {grid.half_width} exceeds "
            f"tolerance {edge_tolerance:.1e}; enlarge the grid or cool the distribution"
        )
    return pi_th


def kinetic_phase(grid: MomentumGrid, omega_r: float = 1.0) -> np.ndarray:
    """Free-evolution frequency of each coherence: 4*omega_r*(p^2 - (p+1)^2)."""
    p = grid.coherence_momenta.astype(np.float64)
    return 4.0 * omega_r * (p * p - (p + 1.0) * (p + 1.0))


def rhs(
    state: EnsembleState,
    params: ModelParams,
    delta: float,
    pi_th: np.ndarray | None = None,
) -> EnsembleState:
    """Instantaneous time derivative of (populations, coherences, a2).

    Pure reference implementation in plain numpy; the integrator uses a
    compiled kernel with identical arithmetic.  ``pi_th`` may be passed to
    avoid recomputing the thermal reference.
    """
    if not np.isfinite(delta):
        raise ValueError(f"delta must be finite, got {delta}")
    grid = state.grid
    if pi_th is None:
        pi_th = thermal_distribution(grid, params.sigma_p)
    elif pi_th.shape != state.populations.shape:
        raise ShapeMismatch("pi_th does not conform to the state grid")

    pi = state.populations
    eta = state.coherences
    a2 = state.a2

    # population coupling, with eta == 0 outside the grid
    padded = np.concatenate(([0.0 + 0.0j], eta, [0.0 + 0.0j]))
    drive = -1j * np.conj(params.beta) * a2 * (padded[:-1] - padded[1:])
    d_pi = 2.0 * drive.real - params.gamma_pop * (pi - pi_th)

    phase = kinetic_phase(grid, params.omega_r)
    d_eta = (
        1j * (phase - delta) * eta
        - params.gamma_coh * eta
        - 1j * params.beta * np.conj(a2) * (pi[1:] - pi[:-1])
    )

    d_a2 = 1j * params.beta * params.n_atoms * np.sum(np.conj(eta)) - 0.5 * params.kappa * (
        a2 - params.a_in
    )
    return EnsembleState(d_pi, d_eta, d_a2)


def adiabatic_probe(coherences: np.ndarray, params: ModelParams) -> complex:
    """Quasi-steady probe amplitude at frozen coherences.

    Root of the probe equation: ``a2 = a_in + (2i beta N / kappa) * sum(eta*)``.
    """
    coherences = np.asarray(coherences, dtype=np.complex128)
    s = np.sum(np.conj(coherences))
    return complex(params.a_in + (2j * params.beta * params.n_atoms / params.kappa) * s)


def scaled_rates(
    delta_pump: float,
    reference: tuple[float, float, float],
) -> tuple[float, float]:
    """Relaxation rates at pump detuning ``delta_pump`` (linewidth units).

    Confinement in the pump lattice suppresses both rates as
    ``|delta/delta_0|**(-3/2)`` relative to the reference point
    ``(delta_0, gamma_pop_0, gamma_coh_0)``.
    """
    delta0, gamma_pop0, gamma_coh0 = reference
    if delta_pump == 0 or delta0 == 0:
        raise ZeroDetuning("pump detuning must be nonzero")
    if gamma_pop0 <= 0 or gamma_coh0 <= 0:
        raise ValueError("reference rates must be > 0")
    factor = abs(delta_pump / delta0) ** -1.5
    return gamma_pop0 * factor, gamma_coh0 * factor


def cooperativity(params: ModelParams) -> float:
    """Collective coupling diagnostic ``G = 2 N |beta|^2 / (kappa * gamma_coh)``.

    An artifact-level figure of merit (the ratio of collective pumping to
    probe and coherence loss); not a measured quantity.
    """
    if params.gamma_coh == 0:
        return float("inf")
    return 2.0 * params.n_atoms * abs(params.beta) ** 2 / (params.kappa * params.gamma_coh)
