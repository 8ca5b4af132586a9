"""Panel rendering from CSV files.

Five panel kinds, one image file each:

* ``spectrum``           gain versus detuning from one spectrum CSV
* ``hysteresis-overlay`` the two chirp directions on one axis
* ``ratio-vs-rate``      peak-gain ratio versus scan rate, log-x
* ``relaxation``         gain recovery versus time after the power drop
* ``scaling``            relaxation time versus pump detuning, log-log,
                         with the fitted power law from the fits sidecar

A render is a pure function of the CSV contents and the panel spec; nothing
is written until every input has parsed, and the image lands via an atomic
rename so a failure never leaves a partial file.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["PlotError", "MissingColumn", "EmptyData", "PanelSpec", "PanelReport", "render", "PANEL_KINDS"]

PANEL_KINDS = ("spectrum", "hysteresis-overlay", "ratio-vs-rate", "relaxation", "scaling")


class PlotError(Exception):
    """Base class for panel-rendering failures."""


class MissingColumn(PlotError):
    """A required column is absent from an input CSV."""


class EmptyData(PlotError):
    """An input CSV parses but carries no data rows."""


@dataclass(frozen=True)
class PanelSpec:
    """One panel: input CSV path(s), kind, axis options, output image path."""

    kind: str
    inputs: tuple
    output: Path
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None
    log_x: bool | None = None
    log_y: bool | None = None

    def __post_init__(self):
        if self.kind not in PANEL_KINDS:
            raise PlotError(f"unknown panel kind {self.kind!r}; expected one of {PANEL_KINDS}")
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))
        wanted = 2 if self.kind in ("hysteresis-overlay", "scaling") else 1
        if len(self.inputs) != wanted:
            raise PlotError(f"panel kind {self.kind!r} needs {wanted} input file(s), got {len(self.inputs)}")


@dataclass(frozen=True)
class PanelReport:
    """What was drawn: output path plus checkable metadata."""

    output: Path
    metadata: dict = field(default_factory=dict)


def read_table(path) -> dict:
    """Read a numeric CSV with a header row into column arrays."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise EmptyData(f"{path}: file is empty") from None
            rows = list(reader)
    except OSError as exc:
        raise PlotError(f"{path}: {exc}") from exc
    if not rows:
        raise EmptyData(f"{path}: no data rows")
    columns = {}
    for j, name in enumerate(header):
        try:
            columns[name] = np.array([float(row[j]) for row in rows])
        except (ValueError, IndexError) as exc:
            raise PlotError(f"{path}: column {name!r} is not numeric throughout") from exc
    return columns


def read_fits(path) -> dict:
    """Read a (name, estimate, stderr) sidecar into a name -> (value, err) map."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            rows = list(reader)
    except OSError as exc:
        raise PlotError(f"{path}: {exc}") from exc
    if header is None or [h.strip() for h in header[:3]] != ["name", "estimate", "stderr"]:
        raise MissingColumn(f"{path}: expected header name,estimate,stderr")
    if not rows:
        raise EmptyData(f"{path}: no fit rows")
    out = {}
    for row in rows:
        try:
            out[row[0]] = (float(row[1]), float(row[2]))
        except (ValueError, IndexError) as exc:
            raise PlotError(f"{path}: malformed fit row {row!r}") from exc
    return out


def _require(table: dict, names, path) -> None:
    for name in names:
        if name not in table:
            raise MissingColumn(f"{path}: missing column {name!r} (has {sorted(table)})")


def _finish(fig, ax, spec: PanelSpec, defaults: dict, metadata: dict) -> PanelReport:
    ax.set_xlabel(spec.xlabel or defaults["xlabel"])
    ax.set_ylabel(spec.ylabel or defaults["ylabel"])
    if spec.title:
        ax.set_title(spec.title)
    if spec.log_x if spec.log_x is not None else defaults.get("log_x", False):
        ax.set_xscale("log")
    if spec.log_y if spec.log_y is not None else defaults.get("log_y", False):
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fmt = spec.output.suffix.lstrip(".").lower() or "png"
    tmp = spec.output.with_name(spec.output.name + ".tmp")
    try:
        fig.savefig(tmp, format=fmt, dpi=150, bbox_inches="tight")
        os.replace(tmp, spec.output)
    finally:
        plt.close(fig)
        if tmp.exists():
            tmp.unlink()
    return PanelReport(output=spec.output, metadata=metadata)


def _panel_spectrum(spec: PanelSpec) -> PanelReport:
    table = read_table(spec.inputs[0])
    _require(table, ("delta", "gain"), spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    order = np.argsort(table["delta"])
    ax.plot(table["delta"][order], table["gain"][order], color="tab:blue", lw=1.5)
    ax.axhline(1.0, color="gray", ls="--", lw=0.8)
    ax.axvline(0.0, color="gray", ls=":", lw=0.8)
    meta = {"n_curves": 1, "peak_gain": float(table["gain"].max())}
    return _finish(
        fig, ax, spec, {"xlabel": "two-photon detuning (recoil units)", "ylabel": "probe gain"}, meta
    )


def _panel_overlay(spec: PanelSpec) -> PanelReport:
    minus = read_table(spec.inputs[0])
    plus = read_table(spec.inputs[1])
    _require(minus, ("delta", "gain"), spec.inputs[0])
    _require(plus, ("delta", "gain"), spec.inputs[1])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    om = np.argsort(minus["delta"])
    op = np.argsort(plus["delta"])
    ax.plot(minus["delta"][om], minus["gain"][om], color="tab:red", lw=1.5, label="falling chirp (g-)")
    ax.plot(plus["delta"][op], plus["gain"][op], color="tab:blue", lw=1.5, label="rising chirp (g+)")
    ax.axhline(1.0, color="gray", ls="--", lw=0.8)
    ax.legend(loc="best")
    meta = {
        "n_curves": 2,
        "g_minus": float(minus["gain"].max()),
        "g_plus": float(plus["gain"].max()),
    }
    return _finish(
        fig, ax, spec, {"xlabel": "two-photon detuning (recoil units)", "ylabel": "probe gain"}, meta
    )


def _panel_ratio_vs_rate(spec: PanelSpec) -> PanelReport:
    table = read_table(spec.inputs[0])
    _require(table, ("rate", "ratio"), spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(table["rate"], table["ratio"], "o-", color="tab:green", lw=1.5)
    ax.axhline(1.0, color="gray", ls="--", lw=0.8)
    meta = {"n_curves": 1, "max_ratio": float(table["ratio"].max())}
    return _finish(
        fig,
        ax,
        spec,
        {"xlabel": "scan rate (recoil units)", "ylabel": "peak-gain ratio g-/g+", "log_x": True},
        meta,
    )


def _panel_relaxation(spec: PanelSpec) -> PanelReport:
    table = read_table(spec.inputs[0])
    _require(table, ("t", "gain"), spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(table["t"], table["gain"], color="tab:purple", lw=1.2)
    meta = {"n_curves": 1, "final_gain": float(table["gain"][-1])}
    return _finish(
        fig, ax, spec, {"xlabel": "time after power drop (recoil units)", "ylabel": "probe gain"}, meta
    )


def _panel_scaling(spec: PanelSpec) -> PanelReport:
    table = read_table(spec.inputs[0])
    _require(table, ("delta_pump", "inverse_rate"), spec.inputs[0])
    fits = read_fits(spec.inputs[1])
    if "power_law_exponent" not in fits or "power_law_prefactor" not in fits:
        raise MissingColumn(
            f"{spec.inputs[1]}: needs power_law_exponent and power_law_prefactor rows"
        )
    slope, slope_err = fits["power_law_exponent"]
    prefactor, _ = fits["power_law_prefactor"]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = table["delta_pump"]
    ax.plot(x, table["inverse_rate"], "o", color="tab:blue", label="measured")
    xx = np.geomspace(x.min(), x.max(), 100)
    ax.plot(xx, prefactor * xx**slope, "--", color="tab:red", label=f"slope {slope:.2f}")
    ax.legend(loc="best")
    meta = {"n_curves": 2, "slope": float(slope), "slope_stderr": float(slope_err)}
    return _finish(
        fig,
        ax,
        spec,
        {
            "xlabel": "pump detuning (linewidths)",
            "ylabel": "thermalization time (recoil units)",
            "log_x": True,
            "log_y": True,
        },
        meta,
    )


_PANELS = {
    "spectrum": _panel_spectrum,
    "hysteresis-overlay": _panel_overlay,
    "ratio-vs-rate": _panel_ratio_vs_rate,
    "relaxation": _panel_relaxation,
    "scaling": _panel_scaling,
}


def render(spec: PanelSpec) -> PanelReport:
    """Draw one panel and write its image file atomically."""
    return _PANELS[spec.kind](spec)
