"""Photon budget of an all-optical switching event.

The hysteresis persists down to picowatt probe powers, so flipping the
transmission state costs remarkably little light.  With the fastest chirp
that still shows bistability, the switching window tau is set by the
coherence lifetime over the scan rate; multiplying by the probe power and
dividing by the photon energy gives the photons spent per switching event,
and the beam-to-diffraction-area ratio converts that into an energy density.

Run:  python demos/06_switching_budget.py
"""

import rirsim as rs

power_w = 20e-12      # weakest probe power with a resolvable bistable response
tau_s = 0.3e-6        # coherence lifetime / fastest bistable scan rate
wavelength_m = 780e-9
waist_m = 100e-6

m = rs.switching_metrics(power_w, tau_s, wavelength_m, waist_m)
print(f"switching window {tau_s * 1e6:.2f} us at {power_w * 1e12:.0f} pW")
print(f"photons per switching event: {m.photon_number:.1f}")
print(f"photons per diffraction-limited area: {m.photons_per_diffraction_area:.2e}")

units = rs.PhysicalUnits()
print(f"\nfor scale, with a {units.recoil_frequency_hz / 1e3:.2f} kHz recoil frequency:")
print(f"  1 recoil unit of detuning = {units.detuning_to_hz(1.0) / 1e3:.2f} kHz")
print(f"  a chirp of 1 recoil unit^2 = {units.chirp_rate_to_mhz_per_ms(1.0):.3f} MHz/ms")
print(f"  20 uK thermal width sigma_p = {units.sigma_p_from_temperature(20e-6):.2f} ladder steps")
