"""Secondary acceptance: all five panel kinds render from the fixture CSVs."""

import csv

from rirplots import PanelSpec, render


def check(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_criterion_14_all_panels_render(fixtures_dir, tmp_path):
    specs = {
        "spectrum": PanelSpec(
            kind="spectrum",
            inputs=(fixtures_dir / "spectrum" / "spectrum.csv",),
            output=tmp_path / "spectrum.png",
        ),
        "hysteresis-overlay": PanelSpec(
            kind="hysteresis-overlay",
            inputs=(
                fixtures_dir / "sweep" / "spectrum_minus.csv",
                fixtures_dir / "sweep" / "spectrum_plus.csv",
            ),
            output=tmp_path / "overlay.png",
        ),
        "ratio-vs-rate": PanelSpec(
            kind="ratio-vs-rate",
            inputs=(fixtures_dir / "hysteresis" / "hysteresis.csv",),
            output=tmp_path / "ratio.png",
        ),
        "relaxation": PanelSpec(
            kind="relaxation",
            inputs=(fixtures_dir / "thermalize" / "thermalize.csv",),
            output=tmp_path / "relaxation.png",
        ),
        "scaling": PanelSpec(
            kind="scaling",
            inputs=(
                fixtures_dir / "scaling" / "scaling.csv",
                fixtures_dir / "scaling" / "fits.csv",
            ),
            output=tmp_path / "scaling.png",
        ),
    }
    reports = {}
    for kind, spec in specs.items():
        reports[kind] = render(spec)
        assert spec.output.is_file() and spec.output.stat().st_size > 0, kind

    overlay_curves = reports["hysteresis-overlay"].metadata["n_curves"]
    with (fixtures_dir / "scaling" / "fits.csv").open() as fh:
        sidecar = {row["name"]: float(row["estimate"]) for row in csv.DictReader(fh)}
    slope = reports["scaling"].metadata["slope"]
    ok = overlay_curves == 2 and slope == sidecar["power_law_exponent"]
    check(
        "criterion 14 (all five panel kinds render)",
        ok,
        f"5/5 panels written; overlay has {overlay_curves} curves; "
        f"scaling slope {slope:.4f} equals fit sidecar",
    )
