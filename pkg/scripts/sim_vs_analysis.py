"""Side-by-side table: analytic fixed point vs simulated attempt rate and
throughput across population sizes, capabilities, and windows.

Usage: python3 scripts/sim_vs_analysis.py [--slots N] [--seed S]
"""

import argparse
import sys

from mprlab.backoff import EBParams, solve_fixed_point
from mprlab.sim import SimConfig, run
from mprlab.slots import PhyTimings, slots_for_mode
from mprlab.throughput import throughput_finite


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--slots", type=int, default=300_000,
                        help="measured slots per run")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--mode", default="aloha",
                        choices=("aloha", "basic", "rtscts"))
    args = parser.parse_args(argv)

    timings = PhyTimings()
    durations = slots_for_mode(args.mode, timings)
    print(f"mode={args.mode}  measured slots={args.slots}")
    print(f"{'N':>4} {'M':>3} {'W0':>4} {'Np_t ana':>10} {'Np_t sim':>10} "
          f"{'S ana Mb/s':>11} {'S sim Mb/s':>11} {'err%':>6}")
    for n in (10, 20, 50):
        for m in (1, 2, 4):
            for w0 in (16, 32):
                eb = EBParams(w0=w0, r=2.0)
                sol = solve_fixed_point(n, m, eb)
                ana = throughput_finite(n, m, sol.p_t, durations,
                                        timings.payload_bits)
                config = SimConfig(n_stations=n, m=m, eb=eb,
                                   access_mode=args.mode, seed=args.seed,
                                   warmup_slots=30_000,
                                   measure_slots=args.slots)
                stats = run(config)
                err = abs(stats.throughput_bits_per_sec
                          - ana.s_bits_per_sec) / ana.s_bits_per_sec
                print(f"{n:>4} {m:>3} {w0:>4} {sol.n_p_t:>10.4f} "
                      f"{stats.attempts_per_slot:>10.4f} "
                      f"{ana.s_bits_per_sec / 1e6:>11.3f} "
                      f"{stats.throughput_bits_per_sec / 1e6:>11.3f} "
                      f"{100 * err:>6.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
