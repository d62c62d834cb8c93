"""Command-line entry point: `plots <figure-kind> --in <csv> --out <img>`."""

import argparse
import sys

from .render import FIGURE_KINDS, FigureSpec, RenderError, render


def make_parser():
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render shadowcell sweep CSVs into PNG and SVG figures",
    )
    parser.add_argument("kind", choices=FIGURE_KINDS, help="figure kind")
    parser.add_argument("--in", dest="csv_path", required=True, help="input sweep CSV")
    parser.add_argument(
        "--out",
        dest="out_path",
        help="output image path; extension is replaced, both .png and .svg are written",
    )
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    out = args.out_path or f"{args.kind}.png"
    try:
        result = render(FigureSpec(args.csv_path, args.kind, out))
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in result.paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
