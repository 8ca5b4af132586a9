"""Regenerate the committed fixture CSVs under fixtures/.

Each fixture is one CLI run of a bundled config into its own subdirectory,
so the files look exactly like what a user gets.  The plotting package's
test suite consumes these files; regenerate them only when the bundled
configs or the simulator's numerics deliberately change.

Run from the repository root:  python scripts/generate_fixtures.py
"""

import json
import shutil
import sys
from pathlib import Path

from rirsim.cli import main

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
CONFIGS = ROOT / "configs"


def run(subcommand: str, config: str, out: str, extra=()):
    dest = FIXTURES / out
    if dest.exists():
        shutil.rmtree(dest)
    args = [subcommand, "--config", str(CONFIGS / config), "--out-dir", str(dest), *extra]
    print("rirsim", " ".join(args))
    code = main(args)
    if code != 0:
        sys.exit(f"fixture run failed with exit code {code}")


def small_spectrum_config() -> Path:
    # static spectrum on the weak instrument, small enough to settle quickly
    cfg = json.loads((CONFIGS / "weak_oracle.json").read_text())
    cfg["spectrum"] = {"delta_min": -16.0, "delta_max": 16.0, "n_points": 33}
    path = FIXTURES / "_spectrum_config.json"
    path.write_text(json.dumps(cfg, indent=2) + "\n", encoding="utf-8")
    return path


if __name__ == "__main__":
    FIXTURES.mkdir(exist_ok=True)
    run("sweep", "strong_sweep.json", "sweep", ("--quiet",))
    run("hysteresis", "strong_sweep.json", "hysteresis", ("--quiet",))
    run("thermalize", "thermalize.json", "thermalize", ("--quiet",))
    run("thermalize", "scaling.json", "scaling", ("--quiet",))
    run("oracle", "weak_oracle.json", "oracle", ("--quiet",))
    spectrum_cfg = small_spectrum_config()
    code = main(
        ["spectrum", "--config", str(spectrum_cfg), "--out-dir", str(FIXTURES / "spectrum"), "--quiet"]
    )
    if code != 0:
        sys.exit(f"spectrum fixture failed with exit code {code}")
    spectrum_cfg.unlink()
    run("metrics", "metrics.json", "metrics", ("--quiet",))
    print("fixtures regenerated under", FIXTURES)
