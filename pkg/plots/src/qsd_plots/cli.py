"""plots <sweep_dir> [--window N] [--format png|svg]"""
from __future__ import annotations

import argparse
import sys

from .figures import PlotInputError, plot_all


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render the figures for a sweep output directory"
    )
    parser.add_argument("sweep_dir")
    parser.add_argument("--window", type=int, default=None,
                        help="moving-average window (raw values by default)")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)
    try:
        outputs = plot_all(args.sweep_dir, window=args.window, image_format=args.format)
    except PlotInputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    for path in outputs:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
