"""Command-line front end: one config file in, CSV files plus a manifest out.

Exit codes: 0 on success, 1 for configuration/usage problems, 2 when the
solver or a fit fails.  All numeric output is written with 17 significant
digits so the CSVs round-trip exactly; identical runs therefore produce
bit-identical files.  The manifest echoes the fully resolved dimensionless
configuration and can itself be passed back through ``--config`` to
reproduce the run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import fit_power_law, linear_response_spectrum
from .config import RunConfig, load_config
from .errors import ConfigError, RirsimError
from .experiments import (
    chirped_sweep,
    hysteresis_map,
    power_sweep,
    static_spectrum,
    switching_metrics,
    thermalization_protocol,
)
from .model import ChirpSchedule, cooperativity, scaled_rates

SUBCOMMANDS = ("spectrum", "sweep", "hysteresis", "power", "thermalize", "metrics", "oracle")

_EXIT_OK = 0
_EXIT_CONFIG = 1
_EXIT_SOLVER = 2


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _spectrum_csv(spec) -> str:
    rows = zip(spec.delta, spec.gain, spec.a2.real, spec.a2.imag, spec.t)
    return _csv(["delta", "gain", "re_a2", "im_a2", "t"], rows)


def _fits_csv(entries) -> str:
    lines = ["name,estimate,stderr"]
    for name, estimate, stderr in entries:
        lines.append(f"{name},{_fmt(estimate)},{_fmt(stderr)}")
    return "\n".join(lines) + "\n"


def _sweep_diag(spec) -> dict:
    d = spec.diagnostics
    if d is None:
        return {}
    return {
        "steps_accepted": d.steps_accepted,
        "steps_rejected": d.steps_rejected,
        "rhs_evaluations": d.rhs_evaluations,
        "min_population": d.min_population,
    }


def _cmd_sweep(cfg: RunConfig, jobs: int, say) -> tuple[list, dict]:
    outputs = []
    diagnostics = {}
    sweep = cfg.sweep
    spec_minus = spec_plus = None
    if sweep.direction in ("minus", "both"):
        spec_minus = chirped_sweep(cfg.grid, cfg.params, sweep.schedule_minus(), cfg.solver)
        diagnostics["spectrum_minus"] = _sweep_diag(spec_minus)
    if sweep.direction in ("plus", "both"):
        spec_plus = chirped_sweep(cfg.grid, cfg.params, sweep.schedule_plus(), cfg.solver)
        diagnostics["spectrum_plus"] = _sweep_diag(spec_plus)
    if sweep.direction == "both":
        outputs.append(("spectrum_minus.csv", _spectrum_csv(spec_minus)))
        outputs.append(("spectrum_plus.csv", _spectrum_csv(spec_plus)))
        ratio = spec_minus.peak_gain / spec_plus.peak_gain
        say(
            f"g-/g+ = {ratio:.6g}  (g- = {spec_minus.peak_gain:.6g} at delta = "
            f"{spec_minus.peak_delta:.6g}, g+ = {spec_plus.peak_gain:.6g} at delta = "
            f"{spec_plus.peak_delta:.6g})"
        )
        diagnostics["peak_ratio"] = ratio
    else:
        spec = spec_minus if sweep.direction == "minus" else spec_plus
        outputs.append(("spectrum.csv", _spectrum_csv(spec)))
        say(f"peak gain {spec.peak_gain:.6g} at delta = {spec.peak_delta:.6g}")
    return outputs, diagnostics


def _cmd_spectrum(cfg: RunConfig, jobs: int, say) -> tuple[list, dict]:
    s = cfg.spectrum
    deltas = np.linspace(s.delta_min, s.delta_max, s.n_points)
    spec = static_spectrum(
        cfg.grid,
        cfg.params,
        deltas,
        opts=cfg.solver,
        steady_tol=s.steady_tol,
        window=s.window,
        max_windows=s.max_windows,
        jobs=jobs,
    )
    say(f"steady gain: max {spec.gain.max():.6g}, min {spec.gain.min():.6g}")
    return [("spectrum.csv", _spectrum_csv(spec))], {}


def _cmd_oracle(cfg: RunConfig, jobs: int, say) -> tuple[list, dict]:
    o = cfg.oracle
    deltas = np.linspace(o.delta_min, o.delta_max, o.n_points)
    orc = linear_response_spectrum(cfg.grid, cfg.params, deltas)
    rows = zip(deltas, orc.gain, orc.a2.real, orc.a2.imag, np.zeros_like(deltas))
    say(
        f"closed-form response: peak gain {orc.gain.max():.6g}, "
        f"collective coupling G = {cooperativity(cfg.params):.6g}"
    )
    return [("oracle.csv", _csv(["delta", "gain", "re_a2", "im_a2", "t"], rows))], {}


def _cmd_hysteresis(cfg: RunConfig, jobs: int, say) -> tuple[list, dict]:
    h = cfg.hysteresis
    points = hysteresis_map(
        cfg.grid, cfg.params, h.rates, h.delta_min, h.delta_max, cfg.solver, jobs=jobs
    )
    rows = [(p.rate, p.g_minus, p.g_plus, p.ratio, p.peak_shift) for p in points]
    for p in points:
        say(f"rate {p.rate:.6g}: g-/g+ = {p.ratio:.6g}")
    return [("hysteresis.csv", _csv(["rate", "g_minus", "g_plus", "ratio", "peak_shift"], rows))], {}


def _cmd_power(cfg: RunConfig, jobs: int, say) -> tuple[list, dict]:
    p = cfg.power
    minus = ChirpSchedule.between(p.delta_max, p.delta_min, p.rate)
    plus = ChirpSchedule.between(p.delta_min, p.delta_max, p.rate)
    points = power_sweep(cfg.grid, cfg.params, p.a_in_values, minus, plus, cfg.solver, jobs=jobs)
    rows = [(pt.power, pt.g_minus, pt.g_plus, pt.ratio) for pt in points]
    for pt in points:
        say(f"|a_in|^2 = {pt.power:.6g}: g-/g+ = {pt.ratio:.6g}")
    return [("power.csv", _csv(["a_in_sq", "g_minus", "g_plus", "ratio"], rows))], {}


def _cmd_thermalize(cfg: RunConfig, jobs: int, say) -> tuple[list, dict]:
    t = cfg.thermalize
    outputs = []
    if t.pump_detunings is None:
        result = thermalization_protocol(
            cfg.grid,
            cfg.params,
            t.strong_a_in,
            t.weak_a_in,
            t_strong=t.t_strong,
            opts=cfg.solver,
            delta=t.delta,
            t_weak=t.t_weak,
            n_samples=t.n_samples,
        )
        outputs.append(("thermalize.csv", _csv(["t", "gain"], zip(result.t, result.gain))))
        fit = result.fit
        outputs.append(
            (
                "fits.csv",
                _fits_csv(
                    [
                        ("relaxation_rate", fit.params["rate"], fit.stderr["rate"]),
                        ("relaxation_tau", fit.params["tau"], fit.stderr["tau"]),
                        ("relaxation_y_inf", fit.params["y_inf"], fit.stderr["y_inf"]),
                        ("relaxation_amplitude", fit.params["amplitude"], fit.stderr["amplitude"]),
                    ]
                ),
            )
        )
        say(
            f"fitted relaxation rate {fit.params['rate']:.6g} "
            f"(configured gamma_pop {cfg.params.gamma_pop:.6g})"
        )
        return outputs, {"delta": result.delta}

    # pump-detuning scan: rates scaled by the confinement law at each point
    reference = (t.reference_detuning, cfg.params.gamma_pop, cfg.params.gamma_coh)
    rows = []
    for delta_pump in t.pump_detunings:
        gamma_pop, gamma_coh = scaled_rates(delta_pump, reference)
        factor = gamma_pop / cfg.params.gamma_pop
        point_params = replace(cfg.params, gamma_pop=gamma_pop, gamma_coh=gamma_coh)
        result = thermalization_protocol(
            cfg.grid,
            point_params,
            t.strong_a_in * factor,
            t.weak_a_in * factor,
            t_strong=(t.t_strong / factor if t.t_strong is not None else None),
            opts=cfg.solver,
            delta=t.delta,
            t_weak=(t.t_weak / factor if t.t_weak is not None else None),
            n_samples=t.n_samples,
        )
        rate = result.fit.params["rate"]
        err = result.fit.stderr["rate"]
        rows.append((delta_pump, 1.0 / rate, err / rate**2))
        say(f"pump detuning {delta_pump:.6g}: 1/rate = {1.0 / rate:.6g}")
    fit = fit_power_law(
        np.array([r[0] for r in rows]), np.array([r[1] for r in rows])
    )
    outputs.append(("scaling.csv", _csv(["delta_pump", "inverse_rate", "inverse_rate_stderr"], rows)))
    outputs.append(
        (
            "fits.csv",
            _fits_csv(
                [
                    ("power_law_exponent", fit.params["exponent"], fit.stderr["exponent"]),
                    ("power_law_prefactor", fit.params["prefactor"], fit.stderr["prefactor"]),
                ]
            ),
        )
    )
    say(f"thermalization-time exponent {fit.params['exponent']:.6g} +- {fit.stderr['exponent']:.3g}")
    return outputs, {}


def _cmd_metrics(cfg: RunConfig, jobs: int, say) -> tuple[list, dict]:
    m = cfg.metrics
    result = switching_metrics(m.power_w, m.tau_s, m.wavelength_m, m.waist_m)
    say(f"photon number: {result.photon_number:.6g}")
    say(f"photons per diffraction-limited area: {result.photons_per_diffraction_area:.6g}")
    rows = [
        ("photon_number", result.photon_number),
        ("photons_per_diffraction_area", result.photons_per_diffraction_area),
    ]
    lines = ["name,value"] + [f"{n},{_fmt(v)}" for n, v in rows]
    return [("metrics.csv", "\n".join(lines) + "\n")], {}


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "hysteresis": _cmd_hysteresis,
    "power": _cmd_power,
    "thermalize": _cmd_thermalize,
    "metrics": _cmd_metrics,
    "oracle": _cmd_oracle,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="rirsim",
        description="Momentum-ladder simulator for recoil-driven probe gain and bistability",
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, description=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="path to the JSON run configuration")
        p.add_argument("--out-dir", default=".", help="directory for CSV and manifest output")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for independent points")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(parser.format_usage(), file=sys.stderr, end="")
        print(f"rirsim: error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    if args.subcommand is None:
        print(parser.format_usage(), file=sys.stderr, end="")
        print("rirsim: error: a subcommand is required", file=sys.stderr)
        return _EXIT_CONFIG
    if args.jobs < 1:
        print("rirsim: error: --jobs must be >= 1", file=sys.stderr)
        return _EXIT_CONFIG

    messages: list[str] = []

    def say(line: str) -> None:
        messages.append(line)
        if not args.quiet:
            print(line)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"rirsim: config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            outputs, diagnostics = _COMMANDS[args.subcommand](cfg, args.jobs, say)
    except ConfigError as exc:
        print(f"rirsim: config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except RirsimError as exc:
        print(f"rirsim: solver error: {exc}", file=sys.stderr)
        return _EXIT_SOLVER
    run_warnings = sorted({str(w.message) for w in caught})
    for message in run_warnings:
        if not args.quiet:
            print(f"rirsim: warning: {message}", file=sys.stderr)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name, text in outputs:
            path = out_dir / name
            _write_atomic(path, text)
            written.append(path)
        manifest = {
            "artifact": {"name": "rirsim", "version": __version__},
            "subcommand": args.subcommand,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "config": cfg.echo,
            "outputs": [name for name, _ in outputs],
            "diagnostics": diagnostics,
            "warnings": run_warnings,
            "messages": messages,
        }
        _write_atomic(out_dir / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    except OSError as exc:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        print(f"rirsim: write error: {exc}", file=sys.stderr)
        return _EXIT_SOLVER
    return _EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
