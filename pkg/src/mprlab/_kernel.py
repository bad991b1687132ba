"""Slot-stepping kernel for the MAC simulator.

Written against numpy scalar semantics (uint64 wraparound, float64 draws) so
the very same function body runs unjitted for small cross-validation runs
and numba-jitted for production runs, producing identical bit streams.
Set MPRLAB_NO_NUMBA=1 to force the unjitted path.
"""

from __future__ import annotations

import os

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
INV53 = np.float64(1.1102230246251565e-16)

# out[] accumulator slots
IDLE, SUCC, COLL, PACKETS, ATTEMPTS, FAILURES = 0, 1, 2, 3, 4, 5


def _draw_impl(states, i, width):
    """Advance stream i and return a uniform integer on [0, width)."""
    s = states[i] + GOLDEN
    states[i] = s
    z = (s ^ (s >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    z = z ^ (z >> np.uint64(31))
    c = np.int64((z >> np.uint64(11)) * INV53 * width)
    if c >= width:
        c = width - 1
    return c


def _make_stepper(draw):
    def step_slots(states, counters, stages, windows, n_slots, m, q,
                   collect, idx, seq, out):
        """Advance the network by n_slots backoff slots.

        states/counters/stages are per-station and mutated in place; windows
        maps backoff stage to contention window; q > 0 enables the
        sequence-pool rule; idx and seq are per-station scratch; out
        accumulates statistics when collect is true.
        """
        n = counters.shape[0]
        cap = windows.shape[0] - 1
        for _ in range(n_slots):
            k = 0
            for i in range(n):
                if counters[i] == 0:
                    idx[k] = i
                    k += 1
                else:
                    counters[i] -= 1
            if k == 0:
                if collect:
                    out[IDLE] += 1
                continue
            delivered = 0
            if q > 0:
                # sequence-pool rule: each transmitter picks a training
                # sequence; winners hold a unique one, subject to capacity
                for j in range(k):
                    seq[j] = draw(states, idx[j], q)
                for j in range(k):
                    unique = True
                    for l in range(k):
                        if l != j and seq[l] == seq[j]:
                            unique = False
                            break
                    st = idx[j]
                    if unique and k <= m:
                        delivered += 1
                        stages[st] = 0
                        counters[st] = draw(states, st, windows[0])
                    else:
                        if stages[st] < cap:
                            stages[st] += 1
                        counters[st] = draw(states, st, windows[stages[st]])
            else:
                if k <= m:
                    delivered = k
                    for j in range(k):
                        st = idx[j]
                        stages[st] = 0
                        counters[st] = draw(states, st, windows[0])
                else:
                    for j in range(k):
                        st = idx[j]
                        if stages[st] < cap:
                            stages[st] += 1
                        counters[st] = draw(states, st, windows[stages[st]])
            if collect:
                if delivered > 0:
                    out[SUCC] += 1
                else:
                    out[COLL] += 1
                out[PACKETS] += delivered
                out[ATTEMPTS] += k
                out[FAILURES] += k - delivered
    return step_slots


step_python = _make_stepper(_draw_impl)

_jitted = None


def get_kernel(force_python: bool | None = None):
    """The fastest available stepper honoring MPRLAB_NO_NUMBA."""
    global _jitted
    if force_python is None:
        force_python = os.environ.get("MPRLAB_NO_NUMBA", "") not in ("", "0")
    if force_python:
        return step_python
    if _jitted is None:
        try:
            import numba
        except ImportError:
            _jitted = step_python
        else:
            draw = numba.njit(nogil=True)(_draw_impl)
            _jitted = numba.njit(nogil=True)(_make_stepper(draw))
    return _jitted
