"""Conversion between laboratory units and the dimensionless recoil system.

Physical constants enter the package only here.  Detunings are quoted as
ordinary frequencies (Hz), chirp rates as MHz/ms, decay rates as 1/s, and
temperatures in microkelvin; everything inside the simulator is expressed in
units of the recoil angular frequency ``omega_r``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import NonPositiveUnit
from .model import ChirpSchedule, ModelParams

__all__ = ["PhysicalUnits", "PhysicalParams", "to_dimensionless", "to_physical"]

_RB87_MASS_KG = 86.909180531 * constants.atomic_mass


@dataclass(frozen=True)
class PhysicalUnits:
    """Anchors for unit conversion; defaults describe the Rb D2 line.

    ``photon_momentum_step`` is the number of photon momenta transferred per
    ladder step (2 for the counter-propagating pump-probe pair).
    """

    recoil_frequency_hz: float = 3770.0
    wavelength_m: float = 780.0e-9
    atom_mass_kg: float = _RB87_MASS_KG
    photon_momentum_step: float = 2.0

    def __post_init__(self):
        for name in (
            "recoil_frequency_hz",
            "wavelength_m",
            "atom_mass_kg",
            "photon_momentum_step",
        ):
            if getattr(self, name) <= 0:
                raise NonPositiveUnit(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def omega_r(self) -> float:
        """Recoil angular frequency in rad/s."""
        return 2.0 * np.pi * self.recoil_frequency_hz

    @property
    def hbar_k(self) -> float:
        """Single-photon momentum in kg m/s."""
        return constants.hbar * 2.0 * np.pi / self.wavelength_m

    # -- detunings (ordinary frequency in Hz) -------------------------------

    def detuning_from_hz(self, f_hz: float) -> float:
        return f_hz / self.recoil_frequency_hz

    def detuning_to_hz(self, delta: float) -> float:
        return delta * self.recoil_frequency_hz

    # -- chirp rates (MHz/ms) ------------------------------------------------

    def chirp_rate_from_mhz_per_ms(self, rate: float) -> float:
        hz_per_s = rate * 1e9
        return 2.0 * np.pi * hz_per_s / self.omega_r**2

    def chirp_rate_to_mhz_per_ms(self, rate: float) -> float:
        hz_per_s = rate * self.omega_r**2 / (2.0 * np.pi)
        return hz_per_s / 1e9

    # -- decay rates (1/s) -----------------------------------------------------

    def decay_from_per_s(self, rate: float) -> float:
        return rate / self.omega_r

    def decay_to_per_s(self, rate: float) -> float:
        return rate * self.omega_r

    # -- times (s) ---------------------------------------------------------

    def time_from_s(self, t: float) -> float:
        return t * self.omega_r

    def time_to_s(self, t: float) -> float:
        return t / self.omega_r

    # -- temperature (K) -----------------------------------------------------

    def sigma_p_from_temperature(self, temperature_k: float) -> float:
        if temperature_k <= 0:
            raise NonPositiveUnit(f"temperature must be > 0, got {temperature_k}")
        momentum = np.sqrt(self.atom_mass_kg * constants.k * temperature_k)
        return momentum / (self.photon_momentum_step * self.hbar_k)

    def temperature_from_sigma_p(self, sigma_p: float) -> float:
        momentum = sigma_p * self.photon_momentum_step * self.hbar_k
        return momentum**2 / (self.atom_mass_kg * constants.k)


@dataclass(frozen=True)
class PhysicalParams:
    """Model parameters stated in laboratory units.

    The couplings ``beta``, ``n_atoms`` and ``a_in`` have no published
    laboratory calibration and stay dimensionless free parameters.
    """

    beta: complex
    n_atoms: float
    kappa_per_s: float
    gamma_pop_per_s: float
    gamma_coh_per_s: float
    a_in: complex
    temperature_uk: float
    delta_start_hz: float
    delta_end_hz: float
    scan_rate_mhz_per_ms: float


def to_dimensionless(
    physical: PhysicalParams, units: PhysicalUnits
) -> tuple[ModelParams, ChirpSchedule]:
    """Convert a physical parameter bundle into recoil units.

    Invertible: :func:`to_physical` reproduces the inputs to better than
    1e-12 relative.
    """
    params = ModelParams(
        beta=physical.beta,
        n_atoms=physical.n_atoms,
        kappa=units.decay_from_per_s(physical.kappa_per_s),
        gamma_pop=units.decay_from_per_s(physical.gamma_pop_per_s),
        gamma_coh=units.decay_from_per_s(physical.gamma_coh_per_s),
        a_in=physical.a_in,
        sigma_p=units.sigma_p_from_temperature(physical.temperature_uk * 1e-6),
        omega_r=1.0,
    )
    schedule = ChirpSchedule.between(
        units.detuning_from_hz(physical.delta_start_hz),
        units.detuning_from_hz(physical.delta_end_hz),
        units.chirp_rate_from_mhz_per_ms(physical.scan_rate_mhz_per_ms),
    )
    return params, schedule


def to_physical(
    params: ModelParams, schedule: ChirpSchedule, units: PhysicalUnits
) -> PhysicalParams:
    """Inverse of :func:`to_dimensionless`."""
    return PhysicalParams(
        beta=params.beta,
        n_atoms=params.n_atoms,
        kappa_per_s=units.decay_to_per_s(params.kappa),
        gamma_pop_per_s=units.decay_to_per_s(params.gamma_pop),
        gamma_coh_per_s=units.decay_to_per_s(params.gamma_coh),
        a_in=params.a_in,
        temperature_uk=units.temperature_from_sigma_p(params.sigma_p) * 1e6,
        delta_start_hz=units.detuning_to_hz(schedule.delta_start),
        delta_end_hz=units.detuning_to_hz(schedule.delta_end),
        scan_rate_mhz_per_ms=units.chirp_rate_to_mhz_per_ms(schedule.rate),
    )
