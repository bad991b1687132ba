"""Discrete-event simulator of saturated exponential-backoff stations.

Time advances in backoff slots.  Every station holds a stage and a counter;
stations whose counter is zero transmit in the slot, everyone else decrements
by one.  Up to M simultaneous transmissions all succeed; more than M is a
total collision.  The sequence-pool variant additionally requires each
winner's training sequence, drawn uniformly from a pool of Q, to be unique
within the slot.

The hot loop lives in _kernel and runs either numba-jitted or as plain
Python over the same source; timeline_trace is an independent pure-Python
reimplementation used to cross-validate the kernel draw for draw.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from ._kernel import (ATTEMPTS, COLL, FAILURES, IDLE, PACKETS, SUCC,
                      _draw_impl, get_kernel)
from .backoff import EBParams
from .rng import stream_states, uniform_counter
from .slots import PhyTimings, SlotDurations, rtscts_phases, slots_for_mode

# the counter draw maps a 53-bit uniform onto [0, W); W must stay well below
# 2**53 for the mapping to remain uniform to within one part in 2**52
MAX_WINDOW = 1 << 52

ACCESS_MODES = ("aloha", "basic", "rtscts")


def window_table(eb: EBParams, stage_cap: int) -> list[int]:
    """Contention windows round(r^i * w0), floored at 1, for stages 0..cap."""
    if stage_cap < 1:
        raise ValueError("stage_cap must be >= 1")
    table = [max(1, int(math.floor(eb.w0 * eb.r ** i + 0.5)))
             for i in range(stage_cap + 1)]
    if table[-1] >= MAX_WINDOW:
        raise ValueError("window at stage_cap overflows the draw range")
    return table


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: population, channel capacity, backoff, timing."""

    n_stations: int
    m: int
    eb: EBParams
    stage_cap: int = 32
    access_mode: str = "aloha"
    timings: PhyTimings = field(default_factory=PhyTimings)
    seed: int = 1
    warmup_slots: int = 100_000
    measure_slots: int = 1_000_000
    sequence_pool: int | None = None
    pool_overhead_s: float = 0.0
    cts_address_fields: int = 1

    def __post_init__(self):
        if self.n_stations < 1:
            raise ValueError("n_stations must be >= 1")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.access_mode not in ACCESS_MODES:
            raise ValueError(f"unknown access mode {self.access_mode!r}")
        if self.warmup_slots < 0:
            raise ValueError("warmup_slots must be >= 0")
        if self.measure_slots < 1:
            raise ValueError("measure_slots must be >= 1")
        if self.sequence_pool is not None and self.sequence_pool < 1:
            raise ValueError("sequence_pool must be >= 1 when present")
        if self.pool_overhead_s < 0:
            raise ValueError("pool_overhead_s must be >= 0")
        if self.cts_address_fields < 1:
            raise ValueError("cts_address_fields must be >= 1")
        window_table(self.eb, self.stage_cap)  # overflow check

    def slot_durations(self) -> SlotDurations:
        return slots_for_mode(self.access_mode, self.timings,
                              self.cts_address_fields)


@dataclass(frozen=True)
class SimStats:
    """Counters and rates measured after warmup."""

    measure_slots: int
    slots_idle: int
    slots_succ: int
    slots_coll: int
    packets_delivered: int
    attempts: int
    elapsed_seconds: float
    throughput_bits_per_sec: float
    attempts_per_slot: float
    cond_collision: float


def _simulate(config: SimConfig, force_python: bool | None) -> SimStats:
    windows = np.asarray(window_table(config.eb, config.stage_cap),
                         dtype=np.int64)
    n = config.n_stations
    states = stream_states(config.seed, n)
    counters = np.empty(n, dtype=np.int64)
    stages = np.zeros(n, dtype=np.int64)
    idx = np.empty(n, dtype=np.int64)
    seq = np.empty(n, dtype=np.int64)
    out = np.zeros(6, dtype=np.int64)
    q = config.sequence_pool or 0
    kernel = get_kernel(force_python)
    with np.errstate(over="ignore"):
        for i in range(n):
            counters[i] = _draw_impl(states, i, windows[0])
        if config.warmup_slots:
            kernel(states, counters, stages, windows, config.warmup_slots,
                   config.m, q, False, idx, seq, out)
        kernel(states, counters, stages, windows, config.measure_slots,
               config.m, q, True, idx, seq, out)

    slots = config.slot_durations()
    t_succ = slots.t_succ + q * config.pool_overhead_s
    idle, succ, coll = int(out[IDLE]), int(out[SUCC]), int(out[COLL])
    packets, attempts = int(out[PACKETS]), int(out[ATTEMPTS])
    failures = int(out[FAILURES])
    elapsed = idle * slots.t_idle + coll * slots.t_coll + succ * t_succ
    return SimStats(
        measure_slots=config.measure_slots,
        slots_idle=idle,
        slots_succ=succ,
        slots_coll=coll,
        packets_delivered=packets,
        attempts=attempts,
        elapsed_seconds=elapsed,
        throughput_bits_per_sec=packets * config.timings.payload_bits / elapsed,
        attempts_per_slot=attempts / config.measure_slots,
        cond_collision=failures / attempts if attempts else 0.0,
    )


def run(config: SimConfig, *, force_python: bool | None = None) -> SimStats:
    """Simulate the base MPR access rule (no sequence pool)."""
    if config.sequence_pool is not None:
        raise ValueError("config has a sequence pool; use run_sequence_pool")
    return _simulate(config, force_python)


def run_sequence_pool(config: SimConfig, *,
                      force_python: bool | None = None) -> SimStats:
    """Simulate with the training-sequence pool win rule."""
    if config.sequence_pool is None:
        raise ValueError("run_sequence_pool needs sequence_pool set")
    return _simulate(config, force_python)


@dataclass(frozen=True)
class SlotEvent:
    """Everything that happened in one traced slot."""

    index: int
    slot_type: str
    transmitters: tuple[int, ...]
    delivered: tuple[int, ...]
    stages_before: tuple[int, ...]
    counters_before: tuple[int, ...]
    stages_after: tuple[int, ...]
    counters_after: tuple[int, ...]
    duration_s: float
    phases: dict[str, float] | None


def timeline_trace(config: SimConfig, n_slots: int) -> list[SlotEvent]:
    """Slot-by-slot event log from a pure-Python replay of the same draws.

    Shares nothing with the compiled kernel beyond the stream seeding, so
    agreement between the two is a real cross-check of the hot loop.
    """
    if n_slots < 0:
        raise ValueError("n_slots must be >= 0")
    windows = window_table(config.eb, config.stage_cap)
    n = config.n_stations
    states = [int(s) for s in stream_states(config.seed, n)]
    counters = [0] * n
    for i in range(n):
        states[i], counters[i] = uniform_counter(states[i], windows[0])
    stages = [0] * n
    slots = config.slot_durations()
    q = config.sequence_pool or 0
    t_succ = slots.t_succ + q * config.pool_overhead_s
    phase_proto = (rtscts_phases(config.timings, config.cts_address_fields)
                   if config.access_mode == "rtscts" else None)

    events = []
    for t in range(n_slots):
        counters_before = tuple(counters)
        stages_before = tuple(stages)
        tx = [i for i in range(n) if counters[i] == 0]
        for i in range(n):
            if counters[i] > 0:
                counters[i] -= 1
        k = len(tx)
        if k == 0:
            events.append(SlotEvent(t, "idle", (), (), stages_before,
                                    counters_before, tuple(stages),
                                    tuple(counters), slots.t_idle, None))
            continue
        if q > 0:
            seqs = []
            for i in tx:
                states[i], s = uniform_counter(states[i], q)
                seqs.append(s)
            winners = {i for j, i in enumerate(tx)
                       if seqs.count(seqs[j]) == 1 and k <= config.m}
        else:
            winners = set(tx) if k <= config.m else set()
        for i in tx:
            if i in winners:
                stages[i] = 0
                states[i], counters[i] = uniform_counter(states[i], windows[0])
            else:
                stages[i] = min(stages[i] + 1, config.stage_cap)
                states[i], counters[i] = uniform_counter(
                    states[i], windows[stages[i]])
        if winners:
            slot_type, duration = "success", t_succ
            phases = dict(phase_proto) if phase_proto is not None else None
        else:
            slot_type, duration = "collision", slots.t_coll
            phases = None
        events.append(SlotEvent(t, slot_type, tuple(tx),
                                tuple(sorted(winners)), stages_before,
                                counters_before, tuple(stages),
                                tuple(counters), duration, phases))
    return events


def format_trace(events: list[SlotEvent]) -> str:
    """One line per slot: index, type, k, duration, transmitter ids."""
    lines = []
    for e in events:
        ids = ",".join(str(i) for i in e.transmitters)
        lines.append(f"{e.index}\t{e.slot_type}\tk={len(e.transmitters)}\t"
                     f"{e.duration_s:.9f}\t{ids}")
    return "\n".join(lines) + ("\n" if lines else "")


def trace_stats(events: list[SlotEvent], config: SimConfig) -> SimStats:
    """Aggregate a trace into the same statistics run() reports."""
    idle = sum(1 for e in events if e.slot_type == "idle")
    succ = sum(1 for e in events if e.slot_type == "success")
    coll = sum(1 for e in events if e.slot_type == "collision")
    packets = sum(len(e.delivered) for e in events)
    attempts = sum(len(e.transmitters) for e in events)
    failures = attempts - packets
    elapsed = sum(e.duration_s for e in events)
    n_slots = len(events)
    return SimStats(
        measure_slots=n_slots,
        slots_idle=idle,
        slots_succ=succ,
        slots_coll=coll,
        packets_delivered=packets,
        attempts=attempts,
        elapsed_seconds=elapsed,
        throughput_bits_per_sec=(packets * config.timings.payload_bits / elapsed
                                 if elapsed else 0.0),
        attempts_per_slot=attempts / n_slots if n_slots else 0.0,
        cond_collision=failures / attempts if attempts else 0.0,
    )
