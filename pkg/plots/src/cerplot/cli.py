"""Command line entry point: plot_cer <out.svg> <csv:label> [...]"""

from __future__ import annotations

import argparse
import sys

from .curves import load_curve, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot_cer",
        description="Plot error-rate sweep CSV files into a single figure.",
    )
    parser.add_argument("out", help="output image path (.svg by default)")
    parser.add_argument(
        "curves",
        nargs="+",
        metavar="csv:label",
        help="sweep CSV path and legend label, separated by the last ':'",
    )
    parser.add_argument("--title", default=None, help="optional figure title")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    specs = []
    for item in args.curves:
        path, sep, label = item.rpartition(":")
        if not sep or not path or not label:
            parser.error(f"expected csv:label, got {item!r}")
        specs.append((path, label))
    try:
        loaded = [load_curve(path, label) for path, label in specs]
        counts = render(loaded, args.out, title=args.title)
    except (OSError, ValueError) as exc:
        print(f"plot_cer: {exc}", file=sys.stderr)
        return 1
    for label, count in counts.items():
        print(f"{label}: {count} points")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
