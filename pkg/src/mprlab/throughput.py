"""Saturation throughput for finite populations and the Poisson limit.

Throughput is payload bits delivered per second: the expected payload carried
by one backoff slot divided by the expected slot duration.  A slot delivers
k*L bits when 1 <= k <= M stations transmit (the channel decodes up to M
simultaneous packets) and nothing otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .attempts import AttemptDistribution, cdf, first_moment_truncated, pmf
from .slots import SlotDurations


@dataclass(frozen=True)
class ThroughputResult:
    """Throughput plus the decomposition every figure needs."""

    s_bits_per_sec: float
    p_idle: float
    p_succ: float
    p_coll: float
    expected_payload_bits_per_slot: float
    expected_slot_seconds: float


def slot_probabilities(dist: AttemptDistribution, m: int) -> tuple[float, float, float]:
    """(p_idle, p_succ, p_coll) for MPR capability m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    p_idle = pmf(dist, 0)
    c_m = cdf(dist, m)
    p_succ = max(0.0, c_m - p_idle)
    p_coll = max(0.0, 1.0 - c_m)
    return p_idle, p_succ, p_coll


def _result(dist: AttemptDistribution, m: int, slots: SlotDurations,
            payload_bits: float) -> ThroughputResult:
    p_idle, p_succ, p_coll = slot_probabilities(dist, m)
    bits = payload_bits * first_moment_truncated(dist, m)
    seconds = p_idle * slots.t_idle + p_coll * slots.t_coll + p_succ * slots.t_succ
    return ThroughputResult(
        s_bits_per_sec=bits / seconds,
        p_idle=p_idle,
        p_succ=p_succ,
        p_coll=p_coll,
        expected_payload_bits_per_slot=bits,
        expected_slot_seconds=seconds,
    )


def throughput_finite(n: int, m: int, p_t: float, slots: SlotDurations,
                      payload_bits: float) -> ThroughputResult:
    """Throughput of n stations each transmitting with probability p_t."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0.0 <= p_t <= 1.0:
        raise ValueError("p_t must be in [0, 1]")
    return _result(AttemptDistribution.binomial(n, p_t), m, slots, payload_bits)


def throughput_asymptotic(lam: float, m: int, slots: SlotDurations,
                          payload_bits: float) -> ThroughputResult:
    """Large-population throughput at Poisson attempt rate lam per slot."""
    if lam < 0.0:
        raise ValueError("lam must be nonnegative")
    if m < 1:
        raise ValueError("m must be >= 1")
    return _result(AttemptDistribution.poisson(lam), m, slots, payload_bits)
