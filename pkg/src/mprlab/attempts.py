"""Probability computations for the per-slot attempt count.

The attempt count X is the number of stations transmitting in a backoff
slot: binomial(N, p_t) for a finite population, Poisson(lambda) in the
large-population limit.  Everything downstream (throughput, fixed points,
optimal design) consumes these pmf/cdf evaluations, so they are computed in
the log domain and are stable for N, lambda up to 1e3 and beyond.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class AttemptDistribution:
    """Distribution of the number of simultaneous transmission attempts.

    kind is "binomial" (fields n, p_t) or "poisson" (field lam).
    """

    kind: str
    n: int = 0
    p_t: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        if self.kind == "binomial":
            if self.n < 1:
                raise ValueError("binomial needs n >= 1")
            if not 0.0 <= self.p_t <= 1.0:
                raise ValueError("p_t must be in [0, 1]")
        elif self.kind == "poisson":
            if self.lam < 0.0:
                raise ValueError("lambda must be nonnegative")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @staticmethod
    def binomial(n: int, p_t: float) -> "AttemptDistribution":
        return AttemptDistribution("binomial", n=n, p_t=p_t)

    @staticmethod
    def poisson(lam: float) -> "AttemptDistribution":
        return AttemptDistribution("poisson", lam=lam)


def _binom_pmf(n: int, p: float, k: int) -> float:
    if k < 0 or k > n:
        return 0.0
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    logc = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    return math.exp(logc + k * math.log(p) + (n - k) * math.log1p(-p))


def _poisson_pmf(lam: float, k: int) -> float:
    if k < 0:
        return 0.0
    if lam == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def pmf(dist: AttemptDistribution, k: int) -> float:
    """Pr{X = k}."""
    if dist.kind == "binomial":
        return _binom_pmf(dist.n, dist.p_t, k)
    return _poisson_pmf(dist.lam, k)


def cdf(dist: AttemptDistribution, k: int) -> float:
    """Pr{X <= k}; 0 for k < 0, exact tail handling at the upper end."""
    if k < 0:
        return 0.0
    if dist.kind == "binomial":
        if k >= dist.n:
            return 1.0
        # Sum the side that carries less mass, so a tiny result is a sum of
        # tiny terms (full relative precision) and a near-1 result is a
        # complement with absolute error ~1e-16.  The split point is the
        # mean, not n/2: below the mean the left tail is the light side.
        if k < dist.n * dist.p_t:
            return min(1.0, math.fsum(_binom_pmf(dist.n, dist.p_t, j) for j in range(k + 1)))
        upper = math.fsum(_binom_pmf(dist.n, dist.p_t, j) for j in range(k + 1, dist.n + 1))
        return max(0.0, 1.0 - upper)
    lam = dist.lam
    if lam == 0.0:
        return 1.0
    # Sum pmf terms over a window around the mode; mass outside
    # lam +- 12 sqrt(lam) is far below the 1e-15 truncation budget, and the
    # first in-window term comes from lgamma so exp(-lam) never underflows.
    spread = 12.0 * math.sqrt(lam) + 40.0
    if k < lam - spread:
        # all of [0, k] sits in the deep left tail, mass below 1e-30
        return 0.0
    j_lo = max(0, math.floor(lam - spread))
    j_hi = min(k, math.ceil(lam + spread))
    term = _poisson_pmf(lam, j_lo)
    total = term
    for j in range(j_lo + 1, j_hi + 1):
        term *= lam / j
        total += term
    return min(1.0, total)


def first_moment_truncated(dist: AttemptDistribution, m: int) -> float:
    """E[X ; X <= m] = sum_{k=1}^{m} k Pr{X = k}.

    Uses the shift identities k*binom(N,k) pmf = N p * binom(N-1, k-1) pmf
    and k*poisson(lam) pmf = lam * poisson pmf(k-1), so the truncated first
    moment is a plain cdf of the shifted law.  Exact and stable.
    """
    if m < 1:
        return 0.0
    if dist.kind == "binomial":
        if dist.n == 1:
            return dist.p_t if m >= 1 else 0.0
        shifted = AttemptDistribution.binomial(dist.n - 1, dist.p_t)
        return dist.n * dist.p_t * cdf(shifted, m - 1)
    return dist.lam * cdf(dist, m - 1)


def poisson_tail_bounds(lam: float, m: int) -> tuple[float, float]:
    """Chernoff-style sandwich for Pr{X <= m-1}, X ~ Poisson(lam).

    For lam < m the lower bound 1 - (lam/m)^m e^(m-lam) applies (upper is 1);
    for lam > m the upper bound (lam/m)^m e^(m-lam) applies (lower is 0).
    lam == m is rejected, the bound degenerates there.
    """
    if lam <= 0.0:
        raise ValueError("lambda must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    if lam == m:
        raise ValueError("bounds degenerate at lambda == m")
    # (lam/m)^m e^(m-lam), evaluated in the log domain
    b = math.exp(m * math.log(lam / m) + (m - lam))
    if lam < m:
        return max(0.0, 1.0 - b), 1.0
    return 0.0, min(1.0, b)


def poisson_mode(lam: float) -> int:
    """Mode of Poisson(lam); ties at integer lam resolve to floor(lam)."""
    if lam <= 0.0:
        raise ValueError("lambda must be positive")
    return math.floor(lam)


def poisson_median_bounds(lam: float) -> tuple[float, float]:
    """(lam - ln 2, lam + 1/3) brackets the Poisson median."""
    if lam <= 0.0:
        raise ValueError("lambda must be positive")
    return lam - LOG2, lam + 1.0 / 3.0
