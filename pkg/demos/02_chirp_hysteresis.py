"""Sweep-direction hysteresis of the probe transmission.

Scanning the two-photon detuning downward transfers resonant atoms one
ladder step up in momentum, which moves them *closer* to the next resonance
of the falling chirp: the transferred population is dragged along, and the
gain peak grows and shifts.  The rising chirp moves atoms away from
resonance instead and sees an almost unperturbed spectrum.  The ratio of
the two peak gains, g-/g+, is the bistability figure of merit.

Run:  python demos/02_chirp_hysteresis.py
"""

from pathlib import Path

import rirsim as rs
from rirsim.config import load_config

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)
CONFIG = Path(__file__).parents[1] / "configs" / "strong_sweep.json"

cfg = load_config(CONFIG)
print(f"strong-coupling instrument: N|beta|^2/kappa = "
      f"{cfg.params.n_atoms * abs(cfg.params.beta)**2 / cfg.params.kappa:.1f}, "
      f"G = {rs.cooperativity(cfg.params):.1f}")

minus = rs.chirped_sweep(cfg.grid, cfg.params, cfg.sweep.schedule_minus(), cfg.solver)
plus = rs.chirped_sweep(cfg.grid, cfg.params, cfg.sweep.schedule_plus(), cfg.solver)
point = rs.hysteresis_ratio(minus, plus)

print(f"falling chirp: peak gain {point.g_minus:.2f} at delta = {minus.peak_delta:.2f}")
print(f"rising  chirp: peak gain {point.g_plus:.2f} at delta = {plus.peak_delta:.2f}")
print(f"g-/g+ = {point.ratio:.3f}, peak shifted by {point.peak_shift:.2f} recoil units")

for name, spec in (("sweep_minus.csv", minus), ("sweep_plus.csv", plus)):
    with open(OUT / name, "w") as fh:
        fh.write("delta,gain\n")
        for d, g in zip(spec.delta, spec.gain):
            fh.write(f"{d:.17g},{g:.17g}\n")
print(f"wrote {OUT / 'sweep_minus.csv'} and {OUT / 'sweep_plus.csv'}")
