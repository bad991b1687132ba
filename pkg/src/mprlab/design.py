"""Optimal attempt rates, transmission probabilities, and backoff factors.

The design questions all reduce to maximizing a smooth unimodal scalar:
throughput over the attempt rate lam (or p_t for a finite population), or
throughput over the backoff factor r through the steady-state map
lam(r).  Where a first-order condition is available it is solved by
bisection; otherwise a coarse grid plus golden-section refinement is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .attempts import AttemptDistribution, cdf, pmf
from .backoff import EBParams, asymptotic_lambda, solve_fixed_point
from .numerics import bisect_root, golden_max, grid_then_golden
from .slots import SlotDurations, aloha_slots
from .throughput import throughput_asymptotic, throughput_finite

R_SEARCH_LO = 1.05
R_SEARCH_HI = 64.0


@dataclass(frozen=True)
class Optimum:
    """A located maximum: argument, objective value, bracket, method."""

    argument: float
    value: float
    bracket: tuple[float, float]
    method: str


def optimal_lambda(m: int) -> Optimum:
    """Attempt rate maximizing non-carrier-sensing asymptotic throughput.

    Solves the first-order condition Pr{X <= m-1} = m Pr{X = m} on (0, m];
    the optimum always sits below m, hitting the boundary only at m = 1.
    The reported value is the normalized throughput S*/R =
    lam* Pr{X <= m-1}.
    """
    if m < 1:
        raise ValueError("m must be >= 1")

    def foc(lam: float) -> float:
        d = AttemptDistribution.poisson(lam)
        return cdf(d, m - 1) - m * pmf(d, m)

    # foc falls from 1 at lam=0+ and is <= 0 at lam=m
    lam = bisect_root(foc, 1e-12, float(m), tol=1e-12)
    value = lam * cdf(AttemptDistribution.poisson(lam), m - 1)
    return Optimum(argument=lam, value=value, bracket=(0.0, float(m)),
                   method="root-find")


def _throughput_slope_numerator(n: int, m: int, p: float,
                                slots: SlotDurations,
                                payload_bits: float) -> float:
    """Sign-carrying numerator of dS/dp for the finite model.

    Uses d pmf(k)/dp = pmf(k) (k - n p) / (p (1 - p)), so the slope of
    num/den is (num' den - num den') up to the positive factor den^2.
    """
    dist = AttemptDistribution(kind="binomial", n=n, p_t=p)
    q = 1.0 - p
    b = [pmf(dist, k) for k in range(m + 1)]
    db = [bk * (k - n * p) / (p * q) for k, bk in enumerate(b)]
    num = payload_bits * sum(k * b[k] for k in range(1, m + 1))
    dnum = payload_bits * sum(k * db[k] for k in range(1, m + 1))
    p_idle, p_succ = b[0], sum(b[1:])
    d_idle, d_succ = db[0], sum(db[1:])
    den = (slots.t_idle * p_idle + slots.t_succ * p_succ
           + slots.t_coll * (1.0 - p_idle - p_succ))
    dden = (slots.t_idle * d_idle + slots.t_succ * d_succ
            + slots.t_coll * (-d_idle - d_succ))
    return dnum * den - num * dden


def optimal_pt(n: int, m: int, slots: SlotDurations,
               payload_bits: float) -> Optimum:
    """Transmission probability maximizing finite-population throughput."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if m >= n:
        # no collisions possible, everyone should always transmit
        s = throughput_finite(n, m, 1.0, slots, payload_bits).s_bits_per_sec
        return Optimum(argument=1.0, value=s, bracket=(0.0, 1.0), method="closed-form")

    def objective(p: float) -> float:
        return throughput_finite(n, m, p, slots, payload_bits).s_bits_per_sec

    p, v = grid_then_golden(objective, 0.0, 1.0, n_grid=201, tol=1e-10)

    # polish: the golden argument carries O(1e-9) error, too coarse for the
    # stationarity identity; bisect the exact slope across the peak
    def slope(x: float) -> float:
        return _throughput_slope_numerator(n, m, x, slots, payload_bits)

    lo = max(p - 1e-3, 1e-12)
    hi = min(p + 1e-3, 1.0 - 1e-12)
    if slope(lo) > 0.0 > slope(hi):
        p = bisect_root(slope, lo, hi, tol=1e-15)
        v = objective(p)
    return Optimum(argument=p, value=v, bracket=(0.0, 1.0), method="golden-section")


def _lambda_of_r(m: int, r: float) -> float:
    return asymptotic_lambda(m, r)


def _s_infinite_of_r(m: int, r: float, slots: SlotDurations,
                     payload_bits: float) -> float:
    lam = _lambda_of_r(m, r)
    return throughput_asymptotic(lam, m, slots, payload_bits).s_bits_per_sec


def optimal_r(m: int, w0: int, slots: SlotDurations, payload_bits: float,
              population: int | str = "infinite") -> Optimum:
    """Backoff factor maximizing steady-state throughput.

    population is "infinite" (attempt rate from the Poisson steady state) or
    a station count N (attempt probability from the finite fixed point).
    The search runs on log r over [1.05, 64]: a coarse grid localizes the
    sharp left shoulder, golden section refines the peak.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if population == "infinite":
        def objective(log_r: float) -> float:
            return _s_infinite_of_r(m, math.exp(log_r), slots, payload_bits)
    else:
        n = int(population)
        if n <= m:
            raise ValueError("finite population needs n > m")

        def objective(log_r: float) -> float:
            sol = solve_fixed_point(n, m, EBParams(w0=w0, r=math.exp(log_r)))
            return throughput_finite(n, m, sol.p_t, slots, payload_bits).s_bits_per_sec

    lo, hi = math.log(R_SEARCH_LO), math.log(R_SEARCH_HI)
    x, v = grid_then_golden(objective, lo, hi, n_grid=160, tol=1e-10)
    return Optimum(argument=math.exp(x), value=v,
                   bracket=(R_SEARCH_LO, R_SEARCH_HI), method="grid+golden-section")


def beb_efficiency(m: int, slots: Optional[SlotDurations] = None,
                   payload_bits: float = 8184.0) -> float:
    """Throughput at r = 2 relative to throughput at the optimal r.

    Infinite-population model; slots defaults to slotted ALOHA.
    """
    if slots is None:
        slots = aloha_slots(payload_bits)
    best = optimal_r(m, w0=32, slots=slots, payload_bits=payload_bits)
    at_two = _s_infinite_of_r(m, 2.0, slots, payload_bits)
    return at_two / best.value


def throughput_vs_r(m: int, slots: SlotDurations, payload_bits: float,
                    r_values: Sequence[float]) -> list[tuple[float, float]]:
    """Steady-state throughput sampled along a sequence of backoff factors."""
    return [(r, _s_infinite_of_r(m, r, slots, payload_bits)) for r in r_values]


def superlinearity_scan(m_max: int, model: str = "asymptotic",
                        n: Optional[int] = None,
                        slots: Optional[SlotDurations] = None,
                        payload_bits: float = 8184.0) -> list[tuple[int, float, float]]:
    """(M, S*(M), S*(M)/M) for M = 1..m_max.

    model "asymptotic" uses the Poisson optimum; "finite" needs n > m_max
    and optimizes p_t per M.  With no slots argument the scan runs the
    non-carrier-sensing model and reports normalized values S*/R, so the
    per-capability column is S*/(M R); with slots it reports bits/second
    over the slot-aware optimum.
    """
    if m_max < 2:
        raise ValueError("m_max must be >= 2")
    out = []
    for m in range(1, m_max + 1):
        if model == "asymptotic":
            if slots is None:
                opt = optimal_lambda(m)
                s = opt.value
            else:
                def objective(lam: float) -> float:
                    return throughput_asymptotic(lam, m, slots, payload_bits).s_bits_per_sec
                # Lemma-2 style bracket: optimum below m, search up to m
                _, s = grid_then_golden(objective, 1e-9, float(m), n_grid=120, tol=1e-10)
        elif model == "finite":
            if n is None or n <= m_max:
                raise ValueError("finite model needs n > m_max")
            use = slots if slots is not None else aloha_slots(payload_bits)
            s = optimal_pt(n, m, use, payload_bits).value
        else:
            raise ValueError(f"unknown model {model!r}")
        out.append((m, s, s / m))
    return out


def efficiency_limit_check(c: float, m: int) -> float:
    """S_inf(m, c*m) / (c*m*R) for ALOHA slots = Pr{Poisson(c*m) <= m-1}.

    The three regimes: c < 1 tends to 1, c > 1 tends to 0, c = 1 tends to
    one half (the Poisson median sits within O(1) of the mean).
    """
    if c <= 0.0 or m < 1:
        raise ValueError("need c > 0 and m >= 1")
    return cdf(AttemptDistribution.poisson(c * m), m - 1)
