"""Command-line interface: one figure per invocation."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureKind, FigureSpec, MissingColumnError, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figrender", description="Render simulator sweep exports")
    sub = parser.add_subparsers(dest="command", required=True)
    ren = sub.add_parser("render", help="render one figure")
    ren.add_argument("--kind", required=True,
                     choices=[k.value for k in FigureKind])
    ren.add_argument("--in", dest="inputs", nargs="+", required=True,
                     metavar="FILE", help="sweep .csv or moment .npz files")
    ren.add_argument("--out", required=True, type=Path, help="image path")
    ren.add_argument("--labels", nargs="*", default=[],
                     help="series labels (one per input)")
    ren.add_argument("--no-normalize", action="store_true",
                     help="disable per-panel heatmap normalization")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    spec = FigureSpec(kind=FigureKind(args.kind),
                      inputs=tuple(Path(p) for p in args.inputs),
                      output=args.out,
                      labels=tuple(args.labels),
                      normalize=not args.no_normalize)
    try:
        sidecar = render(spec)
    except MissingColumnError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out} and {sidecar}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
