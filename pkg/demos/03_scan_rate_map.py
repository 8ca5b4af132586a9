"""Where bistability lives: the hysteresis ratio as a function of scan rate.

Too slow, and the momentum distribution re-thermalizes between ladder
crossings — both sweep directions see the same quasi-static medium and the
ratio collapses to one.  Fast enough, and the transferred population
survives from one rung to the next, so the falling chirp snowballs.  The
knee between the two regimes is the limiting scan rate; it moves with the
thermalization rate, which this script demonstrates by re-running the map
with tenfold faster relaxation.

Run:  python demos/03_scan_rate_map.py
"""

from dataclasses import replace
from pathlib import Path

import rirsim as rs
from rirsim.config import load_config

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)
CONFIG = Path(__file__).parents[1] / "configs" / "strong_sweep.json"

cfg = load_config(CONFIG)
h = cfg.hysteresis

points = rs.hysteresis_map(cfg.grid, cfg.params, h.rates, h.delta_min, h.delta_max, cfg.solver)
print("nominal thermalization rate:")
for p in points:
    print(f"  rate {p.rate:5.2f}: g-/g+ = {p.ratio:.3f}")

fast_relax = replace(cfg.params, gamma_pop=10.0 * cfg.params.gamma_pop)
points_fast = rs.hysteresis_map(cfg.grid, fast_relax, h.rates, h.delta_min, h.delta_max, cfg.solver)
print("10x faster thermalization wipes the memory out:")
for p in points_fast:
    print(f"  rate {p.rate:5.2f}: g-/g+ = {p.ratio:.3f}")

with open(OUT / "ratio_vs_rate.csv", "w") as fh:
    fh.write("rate,ratio_nominal,ratio_fast_relax\n")
    for a, b in zip(points, points_fast):
        fh.write(f"{a.rate:.17g},{a.ratio:.17g},{b.ratio:.17g}\n")
print(f"wrote {OUT / 'ratio_vs_rate.csv'}")
