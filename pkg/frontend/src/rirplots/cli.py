"""Command line: ``plots <panel-kind> --in <csv> [--in2 <csv>] --out <img>``."""

from __future__ import annotations

import argparse
import sys

from .panels import PANEL_KINDS, PanelSpec, PlotError, render


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="plots", description="Render figure panels from rirsim CSV outputs")
    parser.add_argument("kind", choices=PANEL_KINDS, help="panel kind")
    parser.add_argument("--in", dest="in1", required=True, help="primary input CSV")
    parser.add_argument(
        "--in2",
        dest="in2",
        default=None,
        help="second input CSV (rising-chirp spectrum for the overlay, fits sidecar for scaling)",
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", default=None)
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(parser.format_usage(), file=sys.stderr, end="")
        print(f"plots: error: {exc}", file=sys.stderr)
        return 1
    inputs = [args.in1] + ([args.in2] if args.in2 else [])
    try:
        spec = PanelSpec(
            kind=args.kind,
            inputs=tuple(inputs),
            output=args.out,
            title=args.title,
            xlabel=args.xlabel,
            ylabel=args.ylabel,
        )
        report = render(spec)
    except PlotError as exc:
        print(f"plots: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {report.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
