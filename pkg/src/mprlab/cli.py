"""Command-line entry point: scenario file in, CSV artifacts out."""

from __future__ import annotations

import argparse
import sys

from .scenario import MODES, ScenarioError, parse_scenario, run_scenario


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mprlab",
        description="Experiment runner for the MPR WLAN laboratory.")
    parser.add_argument("mode", choices=MODES,
                        help="must agree with the scenario file's mode")
    parser.add_argument("--config", required=True,
                        help="path to a key = value scenario file")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument("--out", help="override the scenario output path")
    parser.add_argument("--figure", type=int,
                        help="figure number for reproduce mode")
    args = parser.parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            scenario = parse_scenario(fh.read())
        if scenario.mode != args.mode:
            raise ScenarioError(
                f"scenario mode {scenario.mode!r} disagrees with "
                f"command {args.mode!r}")
        paths = run_scenario(scenario, out_dir=args.out, seed=args.seed,
                             figure=args.figure)
    except (ScenarioError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
