"""Deterministic 64-bit PRNG with one independent stream per station.

The generator is SplitMix64: a Weyl sequence on the golden-ratio increment
passed through a two-round multiply-xorshift finalizer.  It is tiny, has no
state beyond a single 64-bit word per stream, and the identical update runs
in pure Python and inside the compiled simulator kernel, which is what makes
bit-for-bit replay across both paths possible.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# 2**-53, used to map the top 53 bits of a draw onto [0, 1)
INV53 = 1.1102230246251565e-16


def mix64(z: int) -> int:
    """Finalizer: avalanche a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def stream_states(seed: int, n: int) -> np.ndarray:
    """Initial states for n independent streams derived from one seed.

    Stream i starts from mix64(seed + (i+1)*GOLDEN) so that distinct stations
    land in well-separated regions of the Weyl sequence.
    """
    if n < 1:
        raise ValueError("need at least one stream")
    seed &= MASK64
    out = np.empty(n, dtype=np.uint64)
    for i in range(n):
        out[i] = mix64((seed + (i + 1) * GOLDEN) & MASK64)
    return out


def next_u64(state: int) -> tuple[int, int]:
    """Advance one stream; returns (new_state, output)."""
    state = (state + GOLDEN) & MASK64
    return state, mix64(state)


def uniform_counter(state: int, width: int) -> tuple[int, int]:
    """Advance one stream and draw an integer uniform on [0, width).

    The draw uses the top 53 bits scaled by width in double precision; the
    kernel applies the identical arithmetic so both paths agree exactly.
    Valid for width < 2**52.
    """
    state, val = next_u64(state)
    c = int((val >> 11) * INV53 * width)
    if c >= width:
        c = width - 1
    return state, c
