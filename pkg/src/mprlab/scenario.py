"""Scenario configs and the experiment runner behind the CLI.

A scenario is a line-oriented `key = value` file selecting one of seven
modes and its parameters.  Running a scenario writes CSV artifacts (always
with a header row, every cell finite, floats in %.12g) so the outputs diff
cleanly and plot with any external tool.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import matio, phy
from .backoff import EBParams, solve_fixed_point
from .design import beb_efficiency, optimal_r, superlinearity_scan
from .sim import SimConfig, run, run_sequence_pool
from .slots import PhyTimings, slots_for_mode
from .throughput import throughput_asymptotic, throughput_finite


class ScenarioError(ValueError):
    """Config or run error with enough context to fix the file."""


MODES = ("analyze", "fixpoint", "optimal-r", "scan", "simulate", "phy",
         "reproduce")

_TIMING_KEYS = ("sigma", "sifs", "difs", "delta", "phy_overhead",
                "mac_header_bits", "ack_bits", "rts_bits", "cts_bits",
                "payload_bits", "data_rate", "basic_rate")

# key -> (python type, validator, message)
_PARAM_SPECS: dict[str, tuple] = {}


def _spec(keys, typ, check, msg):
    for k in keys:
        _PARAM_SPECS[k] = (typ, check, msg)


_spec(("n", "m", "w0", "k", "m_rx", "n_sym", "trials", "measure_slots",
       "sequence_pool", "cts_address_fields", "m_max", "n_r", "figure",
       "stage_cap"), int, lambda v: v >= 1, "must be an integer >= 1")
_spec(("warmup_slots", "seed", "replications"), int, lambda v: v >= 0,
      "must be an integer >= 0")
_spec(("r", "r_min", "r_max"), float, lambda v: v > 1.0, "must be > 1")
_spec(("p_t",), float, lambda v: 0.0 <= v <= 1.0, "must be in [0, 1]")
_spec(("lam",), float, lambda v: v >= 0.0, "must be >= 0")
_spec(("snr_db",), float, lambda v: True, "")
_spec(("pool_overhead_s",), float, lambda v: v >= 0.0, "must be >= 0")
_spec(_TIMING_KEYS, float, lambda v: v >= 0.0, "must be >= 0")
_spec(("access_mode",), str, lambda v: v in ("aloha", "basic", "rtscts"),
      "must be one of aloha, basic, rtscts")
_spec(("model",), str, lambda v: v in ("asymptotic", "finite"),
      "must be asymptotic or finite")
_spec(("alphabet",), str, lambda v: v in ("bpsk", "qpsk"),
      "must be bpsk or qpsk")
_spec(("method",), str, lambda v: v in ("ilsp", "exhaustive"),
      "must be ilsp or exhaustive")
_spec(("population",), str, lambda v: v == "infinite" or v.isdigit(),
      "must be 'infinite' or a station count")


@dataclass(frozen=True)
class Scenario:
    name: str
    mode: str
    params: dict = field(default_factory=dict)
    output_path: str = "."


def _convert(key: str, val: str, ln: int):
    if key not in _PARAM_SPECS:
        raise ScenarioError(f"line {ln}: unknown key {key!r}")
    typ, check, msg = _PARAM_SPECS[key]
    try:
        parsed = typ(val)
    except ValueError:
        raise ScenarioError(
            f"line {ln}: {key!r} expects {typ.__name__}, got {val!r}") from None
    if not check(parsed):
        raise ScenarioError(f"line {ln}: {key!r} {msg}, got {val!r}")
    return parsed


def parse_scenario(text: str) -> Scenario:
    """Parse `key = value` lines; '#' starts a comment; errors carry line
    numbers; unknown keys are rejected."""
    name, mode, output_path = "scenario", None, "."
    params: dict = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {ln}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not val:
            raise ScenarioError(f"line {ln}: empty value for {key!r}")
        if key == "name":
            name = val
        elif key == "output_path":
            output_path = val
        elif key == "mode":
            if val not in MODES:
                raise ScenarioError(f"line {ln}: unknown mode {val!r}")
            mode = val
        else:
            params[key] = _convert(key, val, ln)
    if mode is None:
        raise ScenarioError("missing required key 'mode'")
    return Scenario(name=name, mode=mode, params=params,
                    output_path=output_path)


def render_scenario(s: Scenario) -> str:
    """Inverse of parse_scenario up to comment/whitespace normalization."""
    lines = [f"name = {s.name}", f"mode = {s.mode}"]
    for key in sorted(s.params):
        v = s.params[key]
        lines.append(f"{key} = {v!r}" if isinstance(v, float)
                     else f"{key} = {v}")
    lines.append(f"output_path = {s.output_path}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# artifact helpers


def _fmt(v) -> str:
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ScenarioError("refusing to write a non-finite value")
        return "%.12g" % v
    return str(v)


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            if len(row) != len(header):
                raise ScenarioError("row width disagrees with header")
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _pmap(fn, items):
    workers = int(os.environ.get("MPRLAB_THREADS", "1") or "1")
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _need(params: dict, *keys: str):
    missing = [k for k in keys if k not in params]
    if missing:
        raise ScenarioError(f"missing required key(s): {', '.join(missing)}")


def _timings(params: dict) -> PhyTimings:
    overrides = {k: params[k] for k in _TIMING_KEYS if k in params}
    return PhyTimings(**overrides)


def _slot_durations(params: dict):
    return slots_for_mode(params.get("access_mode", "aloha"),
                          _timings(params),
                          params.get("cts_address_fields", 1))


def _eb(params: dict) -> EBParams:
    return EBParams(w0=params.get("w0", 32), r=params.get("r", 2.0))


def _sim_config(params: dict, **overrides) -> SimConfig:
    base = dict(
        n_stations=params["n"], m=params["m"], eb=_eb(params),
        stage_cap=params.get("stage_cap", 32),
        access_mode=params.get("access_mode", "aloha"),
        timings=_timings(params), seed=params.get("seed", 1),
        warmup_slots=params.get("warmup_slots", 100_000),
        measure_slots=params.get("measure_slots", 1_000_000),
        sequence_pool=params.get("sequence_pool"),
        pool_overhead_s=params.get("pool_overhead_s", 0.0),
        cts_address_fields=params.get("cts_address_fields", 1))
    base.update(overrides)
    return SimConfig(**base)


# ---------------------------------------------------------------------------
# mode handlers (each writes files under out/, returns their paths)


def _run_analyze(params: dict, out: str) -> list[str]:
    _need(params, "m")
    m = params["m"]
    slots = _slot_durations(params)
    payload = _timings(params).payload_bits
    mode = params.get("access_mode", "aloha")
    if "lam" in params:
        res = throughput_asymptotic(params["lam"], m, slots, payload)
        header = ["m", "access_mode", "lam", "p_idle", "p_succ", "p_coll",
                  "s_bits_per_sec"]
        rows = [(m, mode, params["lam"], res.p_idle, res.p_succ, res.p_coll,
                 res.s_bits_per_sec)]
    else:
        _need(params, "n")
        n = params["n"]
        if "p_t" in params:
            p_t = params["p_t"]
        else:
            p_t = solve_fixed_point(n, m, _eb(params)).p_t
        res = throughput_finite(n, m, p_t, slots, payload)
        header = ["n", "m", "access_mode", "p_t", "p_idle", "p_succ",
                  "p_coll", "s_bits_per_sec"]
        rows = [(n, m, mode, p_t, res.p_idle, res.p_succ, res.p_coll,
                 res.s_bits_per_sec)]
    return [_write_csv(os.path.join(out, "analyze.csv"), header, rows)]


def _run_fixpoint(params: dict, out: str) -> list[str]:
    _need(params, "n", "m")
    eb = _eb(params)
    sol = solve_fixed_point(params["n"], params["m"], eb)
    header = ["n", "m", "w0", "r", "p_t", "p_c", "n_p_t", "residual",
              "iterations"]
    rows = [(params["n"], params["m"], eb.w0, eb.r, sol.p_t, sol.p_c,
             sol.n_p_t, sol.residual, sol.iterations)]
    return [_write_csv(os.path.join(out, "fixpoint.csv"), header, rows)]


def _optimal_r_rows(params: dict, m_values, modes):
    timings = _timings(params)
    w0 = params.get("w0", 32)
    payload = timings.payload_bits
    pop = params.get("population", "infinite")
    population = pop if pop == "infinite" else int(pop)

    def solve(task):
        m, mode = task
        slots = slots_for_mode(mode, timings, params.get("cts_address_fields", 1))
        opt = optimal_r(m, w0, slots, payload, population=population)
        return (m, mode, opt.argument, opt.value)

    return _pmap(solve, [(m, mode) for mode in modes for m in m_values])


def _run_optimal_r(params: dict, out: str) -> list[str]:
    if "m" in params:
        m_values = [params["m"]]
    else:
        _need(params, "m_max")
        m_values = list(range(1, params["m_max"] + 1))
    rows = _optimal_r_rows(params, m_values,
                           [params.get("access_mode", "aloha")])
    return [_write_csv(os.path.join(out, "optimal_r.csv"),
                       ["m", "access_mode", "r_star", "s_at_r_star"], rows)]


def _run_scan(params: dict, out: str) -> list[str]:
    _need(params, "m_max")
    model = params.get("model", "asymptotic")
    slots = _slot_durations(params) if "access_mode" in params else None
    payload = _timings(params).payload_bits
    triples = superlinearity_scan(params["m_max"], model=model,
                                  n=params.get("n"), slots=slots,
                                  payload_bits=payload)
    return [_write_csv(os.path.join(out, "scan.csv"),
                       ["m", "s_star", "s_star_per_m"], triples)]


def _run_simulate(params: dict, out: str) -> list[str]:
    _need(params, "n", "m")
    config = _sim_config(params)
    stats = (run_sequence_pool(config) if config.sequence_pool is not None
             else run(config))
    header = ["n", "m", "w0", "r", "access_mode", "seed", "measure_slots",
              "slots_idle", "slots_succ", "slots_coll", "packets_delivered",
              "attempts", "elapsed_seconds", "throughput_bits_per_sec",
              "attempts_per_slot", "cond_collision"]
    rows = [(config.n_stations, config.m, config.eb.w0, config.eb.r,
             config.access_mode, config.seed, stats.measure_slots,
             stats.slots_idle, stats.slots_succ, stats.slots_coll,
             stats.packets_delivered, stats.attempts, stats.elapsed_seconds,
             stats.throughput_bits_per_sec, stats.attempts_per_slot,
             stats.cond_collision)]
    return [_write_csv(os.path.join(out, "simulate.csv"), header, rows)]


def _run_phy(params: dict, out: str) -> list[str]:
    _need(params, "k", "m_rx", "n_sym")
    k, m_rx, n_sym = params["k"], params["m_rx"], params["n_sym"]
    snr_db = params.get("snr_db", 20.0)
    trials = params.get("trials", 100)
    alphabet = params.get("alphabet", "bpsk")
    method = params.get("method", "ilsp")
    seed = params.get("seed", 1)
    eta = phy.snr_to_noise_var(snr_db)
    policy = phy.SingularValuePolicy.noise_edge(eta, m_rx, n_sym)
    count_hits = detect_hits = 0
    residuals = []
    last = None
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        h = phy.random_channel(m_rx, k, rng)
        x = phy.random_symbols(k, n_sym, alphabet, rng)
        y = phy.simulate_uplink(h, x, eta, rng)
        if phy.estimate_num_sources(y, policy) == k:
            count_hits += 1
        report = phy.blind_fa_detect(y, k, alphabet, method)
        if phy.match_up_to_ambiguity(report.x_hat, x, alphabet) is not None:
            detect_hits += 1
        residuals.append(report.residual)
        last = (y, h, report.x_hat)
    paths = [_write_csv(
        os.path.join(out, "phy.csv"),
        ["k", "m_rx", "n_sym", "snr_db", "alphabet", "method", "trials",
         "source_count_rate", "detect_rate", "mean_residual"],
        [(k, m_rx, n_sym, snr_db, alphabet, method, trials,
          count_hits / trials, detect_hits / trials,
          sum(residuals) / trials)])]
    for tag, mat in zip(("y", "h", "x_hat"), last):
        p = os.path.join(out, f"phy_last_{tag}.txt")
        matio.save_matrix(p, mat)
        paths.append(p)
    return paths


def _run_reproduce(params: dict, out: str) -> list[str]:
    _need(params, "figure")
    fig = params["figure"]
    handlers = {1: _fig1, 5: _fig5, 8: _fig8, 10: _fig10, 11: _fig11}
    if fig not in handlers:
        raise ScenarioError(f"no reproduction recipe for figure {fig}")
    return handlers[fig](params, out)


def _fig1(params: dict, out: str) -> list[str]:
    m_max = params.get("m_max", 30)
    triples = superlinearity_scan(m_max, model="asymptotic")
    rows = [(m, per_m) for m, _, per_m in triples]
    return [_write_csv(os.path.join(out, "figure1.csv"),
                       ["m", "s_norm"], rows)]


def _fig5(params: dict, out: str) -> list[str]:
    m = params.get("m", 2)
    r = params.get("r", 2.0)
    n_values = (5, 10, 20, 50, 100)
    w0_values = (16, 32)
    seed = params.get("seed", 1)

    def one(task):
        n, w0 = task
        local = dict(params)
        local.update(n=n, m=m, w0=w0, r=r)
        analytic = solve_fixed_point(n, m, EBParams(w0=w0, r=r)).n_p_t
        config = _sim_config(
            local, seed=seed + 7919 * n + w0,
            warmup_slots=params.get("warmup_slots", 20_000),
            measure_slots=params.get("measure_slots", 200_000))
        sim_rate = run(config).attempts_per_slot
        return (n, w0, analytic, sim_rate)

    rows = _pmap(one, [(n, w0) for n in n_values for w0 in w0_values])
    return [_write_csv(os.path.join(out, "figure5.csv"),
                       ["n", "w0", "np_t_analytic", "np_t_sim"], rows)]


def _fig8(params: dict, out: str) -> list[str]:
    timings = _timings(params)
    slots = _slot_durations(params)
    mode = params.get("access_mode", "aloha")
    m_values = [params["m"]] if "m" in params else [1, 2, 4, 8]
    r_lo = params.get("r_min", 1.1)
    r_hi = params.get("r_max", 16.0)
    n_r = params.get("n_r", 40)
    r_grid = np.exp(np.linspace(math.log(r_lo), math.log(r_hi), n_r))
    from .design import throughput_vs_r
    rows = []
    for m in m_values:
        for r, s in throughput_vs_r(m, slots, timings.payload_bits, r_grid):
            rows.append((float(r), m, mode, s))
    return [_write_csv(os.path.join(out, "figure8.csv"),
                       ["r", "m", "access_mode", "s_bits_per_sec"], rows)]


def _fig10(params: dict, out: str) -> list[str]:
    m_max = params.get("m_max", 10)
    timings = _timings(params)

    def one(task):
        m, mode = task
        slots = None if mode == "aloha" else slots_for_mode(mode, timings)
        return (m, mode, beb_efficiency(m, slots, timings.payload_bits))

    rows = _pmap(one, [(m, mode) for mode in ("aloha", "rtscts")
                       for m in range(1, m_max + 1)])
    return [_write_csv(os.path.join(out, "figure10.csv"),
                       ["m", "access_mode", "beb_efficiency"], rows)]


def _fig11(params: dict, out: str) -> list[str]:
    m_max = params.get("m_max", 12)
    rows = _optimal_r_rows(params, list(range(1, m_max + 1)),
                           ["aloha", "basic", "rtscts"])
    return [_write_csv(os.path.join(out, "figure11.csv"),
                       ["m", "access_mode", "r_star", "s_at_r_star"], rows)]


_HANDLERS = {
    "analyze": _run_analyze,
    "fixpoint": _run_fixpoint,
    "optimal-r": _run_optimal_r,
    "scan": _run_scan,
    "simulate": _run_simulate,
    "phy": _run_phy,
    "reproduce": _run_reproduce,
}


def run_scenario(s: Scenario, out_dir: str | None = None,
                 seed: int | None = None,
                 figure: int | None = None) -> list[str]:
    """Execute a scenario; returns the paths of every artifact written."""
    params = dict(s.params)
    if seed is not None:
        params["seed"] = seed
    if figure is not None:
        params["figure"] = figure
    out = out_dir if out_dir is not None else s.output_path
    os.makedirs(out, exist_ok=True)
    return _HANDLERS[s.mode](params, out)
