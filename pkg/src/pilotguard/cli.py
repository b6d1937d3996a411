"""Command-line interface.

Usage::

    pilotguard <subcommand> --config <path> [--trials N] [--seed S]
               [--out PATH] [--workers W] [--no-figure]

Subcommands map one-to-one to experiment kinds.  Exit codes: 0 on success,
1 on configuration errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .config import ConfigError, parse_spec
from .harness import KINDS, run_and_write

__all__ = ["main", "build_parser"]

_KIND_HELP = {
    "snr_curves": "average SNRs under MRT on a (possibly spoofed) pilot estimate",
    "roc": "detector operating points at calibrated thresholds",
    "pd_vs_n": "detection probability versus training length",
    "pd_vs_m": "detection probability versus antenna count",
    "pd_vs_pe": "detection probability versus spoofing power",
    "mse_vs_n": "channel-estimation error versus training length",
    "secrecy_vs_pa": "ergodic secrecy rates versus downlink power",
    "theory_table": "closed-form average-SNR table (no simulation)",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pilotguard",
        description=(
            "Monte Carlo experiments for a random-training-assisted "
            "pilot-spoofing detector with secure beamforming."
        ),
    )
    subparsers = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        sub = subparsers.add_parser(kind, help=_KIND_HELP[kind])
        sub.add_argument(
            "--config", required=True, help="path to the experiment config file"
        )
        sub.add_argument(
            "--trials", type=int, default=None, help="override the trial budget"
        )
        sub.add_argument(
            "--seed", type=int, default=None, help="override the master seed"
        )
        sub.add_argument(
            "--out", default=None, help="override the output CSV path"
        )
        sub.add_argument(
            "--workers",
            type=int,
            default=1,
            help="worker processes for trial blocks (default 1)",
        )
        sub.add_argument(
            "--no-figure",
            action="store_true",
            help="skip rendering the PNG figure next to the CSV",
        )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        with open(args.config, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"i/o error: cannot read config: {exc}", file=sys.stderr)
        return 2

    try:
        spec = parse_spec(text, kind=args.kind)
        if args.trials is not None:
            spec = replace(spec, trials=args.trials)
        if args.seed is not None:
            spec = replace(spec, master_seed=args.seed)
        if args.out is not None:
            spec = replace(spec, output_path=args.out)
        if args.workers < 1:
            raise ConfigError("workers must be >= 1", key="workers")
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        rows, csv_path, fig_path = run_and_write(
            spec, workers=args.workers, render_figure=not args.no_figure
        )
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2

    print(f"wrote {len(rows)} rows to {csv_path}")
    if fig_path is not None:
        print(f"rendered figure to {fig_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
