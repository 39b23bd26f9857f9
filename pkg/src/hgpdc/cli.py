"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical or constraint
failure, 4 partial sweep failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import load_config
from .errors import (ConfigError, ConstraintViolationError, HgpdcError,
                     NumericalError, PartialSweepError, RegimeError)
from .presets import PRESETS, preset_names
from .runner import (CSV_HEADER, csv_row, export_modes, export_moment,
                     run_single, run_sweep, validate_lowgain, write_csv,
                     write_metadata)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hgpdc",
        description="High-gain parametric down-conversion simulator")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="debug-level logging")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one power and print metrics")
    sim.add_argument("config", help="TOML config file")
    sim.add_argument("--power", type=float, required=True,
                     help="pump peak power (W)")
    sim.add_argument("--out", type=Path, default=None,
                     help="output directory for artifacts")
    sim.add_argument("--dump-moment", action="store_true",
                     help="also write the second-moment matrix (.npz)")

    swp = sub.add_parser("sweep", help="run the configured power sweep")
    swp.add_argument("config", help="TOML config file")
    swp.add_argument("--out", type=Path, default=None,
                     help="output directory (default from config)")

    val = sub.add_parser("validate-lowgain",
                         help="compare the lowest-power run to the analytic "
                              "first-order joint spectral amplitude")
    val.add_argument("config", help="TOML config file")
    val.add_argument("--power", type=float, default=None,
                     help="override the validation power (W)")

    pre = sub.add_parser("presets", help="preset utilities")
    pre_sub = pre.add_subparsers(dest="presets_command", required=True)
    pre_sub.add_parser("list", help="list available preset names")

    exp = sub.add_parser("export-modes",
                         help="run one power and export the Schmidt modes")
    exp.add_argument("config", help="TOML config file")
    exp.add_argument("--power", type=float, required=True)
    exp.add_argument("--out", type=Path, default=None)
    return parser


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    rec = run_single(cfg, args.power)
    print(CSV_HEADER)
    print(csv_row(rec))
    out = args.out if args.out is not None else cfg.output_dir
    if args.dump_moment:
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{cfg.label}_moment_{args.power:.6g}W.npz"
        export_moment(rec, path)
        print(f"moment matrix written to {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    out = args.out if args.out is not None else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    try:
        result = run_sweep(cfg, out_dir=out)
    except PartialSweepError as exc:
        print(f"error: {exc} (completed rows kept in the journal)",
              file=sys.stderr)
        return EXIT_PARTIAL
    write_csv(result, out / f"{cfg.label}.csv")
    write_metadata(cfg, out / f"{cfg.label}.meta.json")
    print(f"sweep complete: {len(result.records)} rows in "
          f"{out / (cfg.label + '.csv')}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    cmp = validate_lowgain(cfg, power=args.power)
    print(f"oracle gain: {cmp.oracle_gain_db:.4f} dB")
    print(f"shape error (max-normalized): {cmp.shape_error:.3e}")
    print(f"scale ratio (simulated/analytic): {cmp.scale_ratio:.6f}")
    print(f"purity: oracle {cmp.oracle_purity:.4f}, "
          f"simulated {cmp.simulated_purity:.4f}")
    ok = cmp.shape_error < 0.01 and abs(cmp.scale_ratio - 1.0) < 0.02
    print("PASS" if ok else "FAIL (outside 1% shape / 2% scale)")
    return EXIT_OK if ok else EXIT_NUMERICAL


def _cmd_presets(args) -> int:
    for name in preset_names():
        p = PRESETS[name]
        print(f"{name:28s} theta={p.theta_label:+5.1f} deg  "
              f"L={p.length * 1e3:.2f} mm  "
              f"P=[{p.low_power:.4g}, {p.high_power:.4g}] W")
    return EXIT_OK


def _cmd_export_modes(args) -> int:
    cfg = load_config(args.config)
    rec = run_single(cfg, args.power)
    out = args.out if args.out is not None else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{cfg.label}_modes_{args.power:.6g}W.npz"
    export_modes(rec, path)
    print(f"Schmidt modes written to {path}")
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "validate-lowgain": _cmd_validate,
    "presets": _cmd_presets,
    "export-modes": _cmd_export_modes,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConstraintViolationError, NumericalError, RegimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except HgpdcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
