"""Panel rendering against the simulator's fixture CSVs."""

import csv

import pytest

from rirplots import EmptyData, MissingColumn, PanelSpec, PlotError, render
from rirplots.cli import main
from rirplots.panels import read_fits, read_table


class TestReaders:
    def test_read_table(self, fixtures_dir):
        table = read_table(fixtures_dir / "sweep" / "spectrum_minus.csv")
        assert set(table) == {"delta", "gain", "re_a2", "im_a2", "t"}
        assert table["delta"].size > 100

    def test_read_fits(self, fixtures_dir):
        fits = read_fits(fixtures_dir / "scaling" / "fits.csv")
        assert "power_law_exponent" in fits

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("delta,gain\n")
        with pytest.raises(EmptyData):
            read_table(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("delta,gain\n1.0,spam\n")
        with pytest.raises(PlotError):
            read_table(path)


class TestPanels:
    def test_spectrum_panel(self, fixtures_dir, tmp_path):
        out = tmp_path / "spectrum.png"
        report = render(
            PanelSpec(kind="spectrum", inputs=(fixtures_dir / "spectrum" / "spectrum.csv",), output=out)
        )
        assert out.is_file() and out.stat().st_size > 0
        assert report.metadata["n_curves"] == 1

    def test_spectrum_panel_accepts_sweep_and_oracle_files(self, fixtures_dir, tmp_path):
        for src in ("sweep/spectrum_minus.csv", "oracle/oracle.csv"):
            out = tmp_path / src.replace("/", "_").replace(".csv", ".png")
            render(PanelSpec(kind="spectrum", inputs=(fixtures_dir / src,), output=out))
            assert out.is_file() and out.stat().st_size > 0

    def test_overlay_two_curves(self, fixtures_dir, tmp_path):
        out = tmp_path / "overlay.png"
        report = render(
            PanelSpec(
                kind="hysteresis-overlay",
                inputs=(
                    fixtures_dir / "sweep" / "spectrum_minus.csv",
                    fixtures_dir / "sweep" / "spectrum_plus.csv",
                ),
                output=out,
            )
        )
        assert out.is_file() and out.stat().st_size > 0
        assert report.metadata["n_curves"] == 2
        assert report.metadata["g_minus"] > report.metadata["g_plus"]

    def test_ratio_vs_rate(self, fixtures_dir, tmp_path):
        out = tmp_path / "ratio.png"
        report = render(
            PanelSpec(
                kind="ratio-vs-rate",
                inputs=(fixtures_dir / "hysteresis" / "hysteresis.csv",),
                output=out,
            )
        )
        assert out.is_file() and out.stat().st_size > 0
        assert report.metadata["max_ratio"] > 1.0

    def test_relaxation(self, fixtures_dir, tmp_path):
        out = tmp_path / "relax.png"
        render(
            PanelSpec(
                kind="relaxation",
                inputs=(fixtures_dir / "thermalize" / "thermalize.csv",),
                output=out,
            )
        )
        assert out.is_file() and out.stat().st_size > 0

    def test_scaling_slope_matches_sidecar(self, fixtures_dir, tmp_path):
        out = tmp_path / "scaling.png"
        report = render(
            PanelSpec(
                kind="scaling",
                inputs=(
                    fixtures_dir / "scaling" / "scaling.csv",
                    fixtures_dir / "scaling" / "fits.csv",
                ),
                output=out,
            )
        )
        assert out.is_file() and out.stat().st_size > 0
        with (fixtures_dir / "scaling" / "fits.csv").open() as fh:
            rows = {row["name"]: float(row["estimate"]) for row in csv.DictReader(fh)}
        assert report.metadata["slope"] == rows["power_law_exponent"]

    def test_missing_column_no_partial_file(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\n")
        out = tmp_path / "panel.png"
        with pytest.raises(MissingColumn):
            render(PanelSpec(kind="spectrum", inputs=(bad,), output=out))
        assert not out.exists()

    def test_malformed_csv_no_partial_file(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("delta,gain\n1.0\n")
        out = tmp_path / "panel.png"
        with pytest.raises(PlotError):
            render(PanelSpec(kind="spectrum", inputs=(bad,), output=out))
        assert not out.exists()

    def test_wrong_input_count(self, tmp_path):
        with pytest.raises(PlotError):
            PanelSpec(kind="hysteresis-overlay", inputs=("only_one.csv",), output=tmp_path / "x.png")
        with pytest.raises(PlotError):
            PanelSpec(kind="unknown", inputs=("a.csv",), output=tmp_path / "x.png")


class TestCli:
    def test_cli_renders(self, fixtures_dir, tmp_path, capsys):
        out = tmp_path / "cli.png"
        code = main(
            [
                "spectrum",
                "--in",
                str(fixtures_dir / "spectrum" / "spectrum.csv"),
                "--out",
                str(out),
            ]
        )
        assert code == 0
        assert out.is_file()
        assert "wrote" in capsys.readouterr().out

    def test_cli_overlay_with_second_input(self, fixtures_dir, tmp_path):
        out = tmp_path / "cli_overlay.png"
        code = main(
            [
                "hysteresis-overlay",
                "--in",
                str(fixtures_dir / "sweep" / "spectrum_minus.csv"),
                "--in2",
                str(fixtures_dir / "sweep" / "spectrum_plus.csv"),
                "--out",
                str(out),
            ]
        )
        assert code == 0 and out.is_file()

    def test_cli_bad_kind(self, capsys):
        assert main(["nonsense", "--in", "a.csv", "--out", "b.png"]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_cli_missing_file(self, tmp_path, capsys):
        code = main(["spectrum", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "x.png")])
        assert code == 1
        assert "error" in capsys.readouterr().err
