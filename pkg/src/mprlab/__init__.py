"""Laboratory for WLANs with multipacket reception.

Analytical saturation-throughput engine, exponential-backoff fixed points,
optimal backoff design, a validating discrete-event MAC simulator, a
symbol-level multiuser-detection toolkit, and a scenario-driven CLI.
"""

from .attempts import (AttemptDistribution, cdf, first_moment_truncated, pmf,
                       poisson_median_bounds, poisson_mode,
                       poisson_tail_bounds)
from .backoff import (EBParams, FixedPointSolution,
                      SteadyStateUnreachableError, asymptotic_lambda,
                      pc_of_pt, pt_of_pc, solve_fixed_point)
from .design import (Optimum, beb_efficiency, efficiency_limit_check,
                     optimal_lambda, optimal_pt, optimal_r,
                     superlinearity_scan, throughput_vs_r)
from .frames import (FrameError, decode_ack, decode_cts, encode_ack,
                     encode_cts)
from .phy import (CapabilityExceededError, DetectionReport,
                  SingularValuePolicy, allocate_training, blind_fa_detect,
                  channel_estimate_training, estimate_num_sources,
                  match_up_to_ambiguity, mmse_detect, quantize,
                  random_channel, random_symbols, simulate_uplink,
                  snr_to_noise_var, zf_detect)
from .scenario import (Scenario, ScenarioError, parse_scenario,
                       render_scenario, run_scenario)
from .sim import (SimConfig, SimStats, SlotEvent, format_trace, run,
                  run_sequence_pool, timeline_trace, trace_stats,
                  window_table)
from .slots import (PhyTimings, SlotDurations, aloha_slots, basic_slots,
                    rtscts_phases, rtscts_slots, slots_for_mode)
from .throughput import (ThroughputResult, slot_probabilities,
                         throughput_asymptotic, throughput_finite)

__version__ = "0.1.0"
