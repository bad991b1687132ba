"""Exponential-backoff steady state: the coupled (p_t, p_c) system.

Under exponential backoff with minimum window W0 and factor r, a station's
long-run transmission probability is p_t = 2(1 - r p_c) / (W0 (1 - p_c) +
1 - r p_c), where p_c is the probability a given attempt fails.  An attempt
fails when at least M of the other N-1 stations transmit in the same slot.
Both maps are monotone, so the intersection is unique and bisection finds it
with guaranteed convergence.  In the large-N limit the attempt rate
lam = N p_t solves Pr{Poisson(lam) <= M-1} = 1 - 1/r.
"""

from __future__ import annotations

from dataclasses import dataclass

from .attempts import AttemptDistribution, cdf
from .numerics import bisect_root


class SteadyStateUnreachableError(ValueError):
    """Raised when r*p_c >= 1: the backoff chain has no steady state."""


@dataclass(frozen=True)
class EBParams:
    """Minimum contention window and backoff factor."""

    w0: int
    r: float

    def __post_init__(self):
        if self.w0 < 1:
            raise ValueError("w0 must be >= 1")
        if self.r <= 1.0:
            raise ValueError("r must be > 1")


@dataclass(frozen=True)
class FixedPointSolution:
    p_t: float
    p_c: float
    n_p_t: float
    residual: float
    iterations: int


def pt_of_pc(p_c: float, eb: EBParams) -> float:
    """Transmission probability induced by conditional collision probability."""
    if not 0.0 <= p_c <= 1.0:
        raise ValueError("p_c must be in [0, 1]")
    if eb.r * p_c >= 1.0:
        raise SteadyStateUnreachableError(
            f"r*p_c = {eb.r * p_c:.6f} >= 1, backoff windows diverge")
    top = 1.0 - eb.r * p_c
    return 2.0 * top / (eb.w0 * (1.0 - p_c) + top)


def pc_of_pt(p_t: float, n: int, m: int) -> float:
    """Probability an attempt fails: at least m of the other n-1 transmit."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if not 0.0 <= p_t <= 1.0:
        raise ValueError("p_t must be in [0, 1]")
    if m >= n or p_t == 0.0:
        return 0.0
    others = AttemptDistribution.binomial(n - 1, p_t)
    return max(0.0, 1.0 - cdf(others, m - 1))


def solve_fixed_point(n: int, m: int, eb: EBParams,
                      tol: float = 1e-13) -> FixedPointSolution:
    """Unique root of the coupled system for a finite population.

    pt_of_pc is strictly decreasing and pc_of_pt nondecreasing, so
    F(p) = p - pt_of_pc(pc_of_pt(p)) is strictly increasing on
    (0, 2/(w0+1)] and crosses zero exactly once.  Candidate p whose induced
    p_c violates r*p_c < 1 map to 0, which keeps F continuous; the root
    itself always satisfies the steady-state condition because F = 0 forces
    a positive unclamped image.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    p_max = 2.0 / (eb.w0 + 1.0)
    if m >= n:
        # collisions are impossible, the chain never leaves stage 0
        return FixedPointSolution(p_t=p_max, p_c=0.0, n_p_t=n * p_max,
                                  residual=0.0, iterations=0)

    evals = 0

    def f(p: float) -> float:
        nonlocal evals
        evals += 1
        p_c = pc_of_pt(p, n, m)
        if eb.r * p_c >= 1.0:
            mapped = 0.0
        else:
            mapped = pt_of_pc(p_c, eb)
        return p - mapped

    lo = 1e-308
    if f(p_max) < 0.0:
        raise SteadyStateUnreachableError(
            "no steady state: every candidate p_t maps above itself")
    p_t = bisect_root(f, lo, p_max, tol=tol)
    p_c = pc_of_pt(p_t, n, m)
    residual = abs(p_t - pt_of_pc(p_c, eb))
    return FixedPointSolution(p_t=p_t, p_c=p_c, n_p_t=n * p_t,
                              residual=residual, iterations=evals)


def asymptotic_lambda(m: int, r: float, tol: float = 1e-13) -> float:
    """Large-population attempt rate: Pr{Poisson(lam) <= m-1} = 1 - 1/r.

    The left side falls strictly from 1 to 0 in lam, so the solution is
    unique for any r > 1.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if r <= 1.0:
        raise ValueError("r must be > 1")
    target = 1.0 - 1.0 / r

    def f(lam: float) -> float:
        return cdf(AttemptDistribution.poisson(lam), m - 1) - target

    hi = max(4.0, 2.0 * m)
    while f(hi) > 0.0:
        hi *= 2.0
    return bisect_root(f, 1e-300, hi, tol=tol)
