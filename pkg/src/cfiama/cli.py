"""Command line entry point.

    cfiama --config setup.cfg --schemes iarmin,scalable --precoder both \
           --setups 30 --seed 7 --out runs/demo

writes results.csv (one row per setup/scheme/precoder/UE), summary.csv
(average and 90%-likely SE per scheme/precoder) and manifest.json into the
output directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import SimulationConfig, parse_config
from .experiment import PRECODERS, RunManifest, run_experiment
from .schemes import SCHEME_ORDER


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cfiama",
        description="Downlink SE evaluation of massive access schemes for "
                    "cell-free massive MIMO.")
    parser.add_argument("--config", metavar="PATH",
                        help="key=value config file (defaults used when omitted)")
    parser.add_argument("--schemes", default=",".join(SCHEME_ORDER), metavar="LIST",
                        help=f"comma-separated subset of: {','.join(SCHEME_ORDER)}")
    parser.add_argument("--precoder", default="both", choices=("mr", "lpmmse", "both"),
                        help="downlink precoder(s) to evaluate")
    parser.add_argument("--setups", type=int, metavar="N",
                        help="override the number of network setups")
    parser.add_argument("--seed", type=int, metavar="U64",
                        help="override the master seed")
    parser.add_argument("--out", required=True, metavar="DIR",
                        help="output directory for results.csv / summary.csv")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = parse_config(args.config) if args.config else SimulationConfig()
        overrides = {}
        if args.setups is not None:
            overrides["n_setups"] = args.setups
        if args.seed is not None:
            overrides["seed"] = args.seed
        if overrides:
            config = dataclasses.replace(config, **overrides)
        schemes = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
        if not schemes:
            raise ValueError("--schemes must name at least one scheme")
        precoders = PRECODERS if args.precoder == "both" else (args.precoder,)
        manifest = RunManifest(config=config, schemes=schemes, precoders=precoders,
                               out_dir=args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    results_path, summary_path = run_experiment(manifest)
    print(f"wrote {results_path}")
    print(f"wrote {summary_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
