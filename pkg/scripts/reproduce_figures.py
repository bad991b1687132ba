"""Regenerate every figure-data CSV at desk scale.

Usage: python3 scripts/reproduce_figures.py [--out DIR] [--seed S]
"""

import argparse
import sys
import time

from mprlab.scenario import Scenario, run_scenario

FIGURES = (1, 5, 8, 10, 11)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/figures")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)
    for fig in FIGURES:
        t0 = time.time()
        scenario = Scenario(name=f"figure-{fig}", mode="reproduce",
                            params={"figure": fig, "seed": args.seed},
                            output_path=args.out)
        for path in run_scenario(scenario):
            print(f"figure {fig:2d} -> {path}  ({time.time() - t0:.1f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
