"""Bracketed scalar root finding and maximization.

Everything the design layer optimizes is a smooth unimodal scalar function,
so guaranteed-convergence bracket methods are all that is needed.
"""

from __future__ import annotations

import math
from typing import Callable

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-13, max_iter: int = 200) -> float:
    """Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.

    Endpoints where f is exactly zero are returned directly, so a root that
    sits on the bracket boundary is fine.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError("root not bracketed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def golden_max(f: Callable[[float], float], lo: float, hi: float,
               tol: float = 1e-10) -> tuple[float, float]:
    """Maximizer of a unimodal f on [lo, hi]; returns (argmax, value)."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def grid_then_golden(f: Callable[[float], float], lo: float, hi: float,
                     n_grid: int = 160, tol: float = 1e-10) -> tuple[float, float]:
    """Coarse grid scan followed by golden-section refinement.

    The grid localizes the peak so a sharp shoulder near one end of the
    bracket cannot be missed; golden section then resolves the argument to
    tol within the two neighboring grid cells.
    """
    if n_grid < 3:
        raise ValueError("n_grid must be >= 3")
    step = (hi - lo) / (n_grid - 1)
    xs = [lo + i * step for i in range(n_grid)]
    vals = [f(x) for x in xs]
    i = max(range(n_grid), key=vals.__getitem__)
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, n_grid - 1)]
    x, v = golden_max(f, a, b, tol)
    # the refined point can only improve on the grid winner
    if vals[i] > v:
        return xs[i], vals[i]
    return x, v
