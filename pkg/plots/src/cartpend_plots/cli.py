"""Command line for regenerating figures from cartpend CLI outputs."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, plot_degradation, plot_trajectories
from .io import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartpend-plots",
        description="Render cartpend trajectory CSVs and sweep JSONs into SVG+PNG figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    traj = sub.add_parser("trajectories", help="panel plot of one or more trajectory CSVs")
    traj.add_argument("output", help="output path stem (no extension)")
    traj.add_argument("inputs", nargs="+", help="trajectory CSV files")
    traj.add_argument("--labels", help="comma-separated legend labels, one per input")
    traj.add_argument("--layout", choices=["per-run", "per-signal"], default="per-run")
    traj.add_argument("--title")

    deg = sub.add_parser("degradation", help="peak-vs-T curves from sweep JSONs")
    deg.add_argument("output", help="output path stem (no extension)")
    deg.add_argument("inputs", nargs="+", help="sweep summary JSON files")
    deg.add_argument("--labels", help="comma-separated legend labels, one per input")
    deg.add_argument("--title")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    labels = tuple(args.labels.split(",")) if args.labels else None
    try:
        spec = FigureSpec(
            inputs=tuple(args.inputs),
            output=args.output,
            labels=labels,
            layout=getattr(args, "layout", "per-run"),
            title=args.title,
        )
        if args.command == "trajectories":
            svg, png = plot_trajectories(spec)
        else:
            svg, png = plot_degradation(spec)
    except (FileNotFoundError, SchemaError, ValueError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1
    print(svg)
    print(png)
    return 0


if __name__ == "__main__":
    sys.exit(main())
