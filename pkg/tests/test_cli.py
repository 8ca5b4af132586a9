"""Configuration loading and the command-line surface."""

import json
import subprocess
import sys

import pytest

import rirsim as rs
from rirsim.cli import main
from rirsim.config import load_config, resolve_config
from rirsim.errors import ParseError, UnknownKey, ValidationError

from conftest import CONFIG_DIR

FAST_SWEEP = {
    "units": "dimensionless",
    "grid": {"half_width": 16},
    "model": {
        "beta_re": 0.35,
        "n_atoms": 750000.0,
        "kappa": 100000.0,
        "gamma_pop": 0.3,
        "gamma_coh": 1.0,
        "a_in_re": 0.001,
        "sigma_p": 1.0,
    },
    "sweep": {"delta_min": -20.0, "delta_max": 6.0, "rate": 0.8, "direction": "both"},
}


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return path


class TestLoadConfig:
    def test_minimal_defaults(self, tmp_path):
        cfg = load_config(write_config(tmp_path, {}))
        assert cfg.grid.half_width == 64
        assert cfg.solver.mode == "adiabatic-probe"
        assert cfg.solver.method == "adaptive-embedded"
        assert cfg.params.sigma_p == 3.7

    def test_validation_error_names_field(self, tmp_path):
        path = write_config(tmp_path, {"model": {"sigma_p": -1}})
        with pytest.raises(ValidationError, match="sigma_p"):
            load_config(path)

    def test_grid_too_small_for_temperature_rejected(self, tmp_path):
        path = write_config(tmp_path, {"grid": {"half_width": 4}, "model": {"sigma_p": 3.7}})
        with pytest.raises(ValidationError, match="half_width"):
            load_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, {"model": {"sigma_q": 2.0}})
        with pytest.raises(UnknownKey, match="sigma_q"):
            load_config(path)
        path2 = write_config(tmp_path, {"extra_section": {}}, name="c2.json")
        with pytest.raises(UnknownKey, match="extra_section"):
            load_config(path2)

    def test_parse_error_carries_line_info(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "grid": {,}\n}', encoding="utf-8")
        with pytest.raises(ParseError, match=r":2:"):
            load_config(path)

    def test_physical_config_matches_unit_conversion(self, tmp_path):
        obj = json.loads((CONFIG_DIR / "physical_example.json").read_text())
        cfg = load_config(write_config(tmp_path, obj))
        units = rs.PhysicalUnits(
            recoil_frequency_hz=3770.0, wavelength_m=7.8e-7, photon_momentum_step=2.0
        )
        physical = rs.PhysicalParams(
            beta=0.2,
            n_atoms=1e5,
            kappa_per_s=1e10,
            gamma_pop_per_s=1200.0,
            gamma_coh_per_s=24000.0,
            a_in=1.0,
            temperature_uk=20.0,
            delta_start_hz=-170000.0,
            delta_end_hz=8000.0,
            scan_rate_mhz_per_ms=0.07,
        )
        params, schedule = rs.to_dimensionless(physical, units)
        assert cfg.params.kappa == pytest.approx(params.kappa, rel=1e-12)
        assert cfg.params.gamma_pop == pytest.approx(params.gamma_pop, rel=1e-12)
        assert cfg.params.gamma_coh == pytest.approx(params.gamma_coh, rel=1e-12)
        assert cfg.params.sigma_p == pytest.approx(params.sigma_p, rel=1e-12)
        assert cfg.sweep.delta_min == pytest.approx(schedule.delta_start, rel=1e-12)
        assert cfg.sweep.delta_max == pytest.approx(schedule.delta_end, rel=1e-12)
        assert cfg.sweep.rate == pytest.approx(schedule.rate, rel=1e-12)
        # echo is dimensionless and reloadable to the same resolved values
        assert cfg.echo["units"] == "dimensionless"
        again = resolve_config(cfg.echo)
        assert again.params == cfg.params

    def test_physical_units_block_requires_physical_mode(self, tmp_path):
        path = write_config(tmp_path, {"physical_units": {"recoil_frequency_hz": 3770.0}})
        with pytest.raises(ValidationError, match="physical_units"):
            load_config(path)

    def test_bundled_strong_fixture_shows_hysteresis(self):
        # the frozen regression fixture of the bundled strong config recorded
        # its peak-gain ratio in the manifest; it must exceed one
        manifest = json.loads(
            (CONFIG_DIR.parent / "fixtures" / "sweep" / "manifest.json").read_text()
        )
        assert manifest["diagnostics"]["peak_ratio"] > 1.05
        assert manifest["outputs"] == ["spectrum_minus.csv", "spectrum_plus.csv"]

    def test_bundled_configs_load(self):
        for name in (
            "strong_sweep.json",
            "thermalize.json",
            "scaling.json",
            "weak_oracle.json",
            "metrics.json",
            "physical_example.json",
        ):
            cfg = load_config(CONFIG_DIR / name)
            assert cfg.grid.half_width >= 1


class TestCliRuns:
    def test_metrics_outputs_and_stdout(self, tmp_path, capsys):
        code = main(
            [
                "metrics",
                "--config",
                str(CONFIG_DIR / "metrics.json"),
                "--out-dir",
                str(tmp_path / "out"),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "23.5" in out
        assert "7.26" in out
        text = (tmp_path / "out" / "metrics.csv").read_text()
        assert text.splitlines()[0] == "name,value"
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["subcommand"] == "metrics"
        assert manifest["outputs"] == ["metrics.csv"]
        assert manifest["warnings"] == []

    def test_sweep_echoes_ratio_and_writes_both_directions(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FAST_SWEEP)
        code = main(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / "out")])
        assert code == 0
        out = capsys.readouterr().out
        assert "g-/g+" in out
        header = (tmp_path / "out" / "spectrum_minus.csv").read_text().splitlines()[0]
        assert header == "delta,gain,re_a2,im_a2,t"
        assert (tmp_path / "out" / "spectrum_plus.csv").exists()

    def test_quiet_suppresses_stdout(self, tmp_path, capsys):
        code = main(
            [
                "metrics",
                "--config",
                str(CONFIG_DIR / "metrics.json"),
                "--out-dir",
                str(tmp_path / "out"),
                "--quiet",
            ]
        )
        assert code == 0
        assert capsys.readouterr().out == ""

    def test_repeated_runs_bit_identical(self, tmp_path):
        cfg = write_config(tmp_path, FAST_SWEEP)
        for sub in ("a", "b"):
            assert main(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / sub), "--quiet"]) == 0
        for name in ("spectrum_minus.csv", "spectrum_plus.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_manifest_reruns_bit_identical(self, tmp_path):
        cfg = write_config(tmp_path, FAST_SWEEP)
        assert main(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / "a"), "--quiet"]) == 0
        manifest_path = tmp_path / "a" / "manifest.json"
        assert main(["sweep", "--config", str(manifest_path), "--out-dir", str(tmp_path / "b"), "--quiet"]) == 0
        for name in ("spectrum_minus.csv", "spectrum_plus.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_csv_values_round_trip_at_full_precision(self, tmp_path):
        cfg = write_config(tmp_path, FAST_SWEEP)
        assert main(["sweep", "--config", str(cfg), "--out-dir", str(tmp_path / "out"), "--quiet"]) == 0
        lines = (tmp_path / "out" / "spectrum_minus.csv").read_text().splitlines()
        values = [float(x) for x in lines[1].split(",")]
        assert len(values) == 5
        # 17 significant digits survive the text round trip exactly
        assert f"{values[1]:.17g}" == lines[1].split(",")[1]

    def test_unknown_subcommand_usage_exit_one(self, tmp_path, capsys):
        code = main(["frobnicate", "--config", "x.json"])
        assert code == 1
        err = capsys.readouterr().err
        assert "usage" in err.lower()

    def test_missing_subcommand_exit_one(self, capsys):
        assert main([]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_config_error_exit_one(self, tmp_path, capsys):
        path = write_config(tmp_path, {"model": {"sigma_p": -2}})
        code = main(["sweep", "--config", str(path), "--out-dir", str(tmp_path / "out")])
        assert code == 1
        assert "sigma_p" in capsys.readouterr().err

    def test_solver_failure_exit_two_no_partial_outputs(self, tmp_path, capsys):
        broken = dict(FAST_SWEEP)
        broken["solver"] = {"max_steps": 40}
        path = write_config(tmp_path, broken)
        out_dir = tmp_path / "out"
        code = main(["sweep", "--config", str(path), "--out-dir", str(out_dir)])
        assert code == 2
        assert not out_dir.exists() or not any(out_dir.iterdir())

    def test_jobs_flag_preserves_output_order(self, tmp_path):
        cfg = dict(FAST_SWEEP)
        cfg["hysteresis"] = {"rates": [0.5, 1.0], "delta_min": -20.0, "delta_max": 6.0}
        path = write_config(tmp_path, cfg)
        for sub, jobs in (("seq", "1"), ("par", "2")):
            code = main(
                [
                    "hysteresis",
                    "--config",
                    str(path),
                    "--out-dir",
                    str(tmp_path / sub),
                    "--jobs",
                    jobs,
                    "--quiet",
                ]
            )
            assert code == 0
        assert (tmp_path / "seq" / "hysteresis.csv").read_bytes() == (
            tmp_path / "par" / "hysteresis.csv"
        ).read_bytes()

    def test_console_entry_point(self, tmp_path):
        result = subprocess.run(
            [
                sys.executable,
                "-m",
                "rirsim.cli",
                "metrics",
                "--config",
                str(CONFIG_DIR / "metrics.json"),
                "--out-dir",
                str(tmp_path / "out"),
                "--quiet",
            ],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0, result.stderr


class TestThermalizeCli:
    def test_scaling_mode_outputs(self, tmp_path, capsys):
        # three-point pump-detuning scan, light-weight instrument
        obj = json.loads((CONFIG_DIR / "scaling.json").read_text())
        obj["thermalize"]["pump_detunings"] = [1.0, 1.7, 3.0]
        path = write_config(tmp_path, obj)
        code = main(["thermalize", "--config", str(path), "--out-dir", str(tmp_path / "out")])
        assert code == 0
        scaling = (tmp_path / "out" / "scaling.csv").read_text().splitlines()
        assert scaling[0] == "delta_pump,inverse_rate,inverse_rate_stderr"
        assert len(scaling) == 4
        fits = (tmp_path / "out" / "fits.csv").read_text().splitlines()
        assert fits[0] == "name,estimate,stderr"
        names = [line.split(",")[0] for line in fits[1:]]
        assert "power_law_exponent" in names

    def test_too_few_pump_detunings_rejected(self, tmp_path):
        obj = json.loads((CONFIG_DIR / "scaling.json").read_text())
        obj["thermalize"]["pump_detunings"] = [1.0, 2.0]
        path = write_config(tmp_path, obj)
        assert main(["thermalize", "--config", str(path), "--out-dir", str(tmp_path / "o")]) == 1
