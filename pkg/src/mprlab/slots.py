"""Backoff-slot duration triples for the three network types.

A contention round lasts T_i when nobody transmits, T_c when the slot is
wasted by a collision, and T_s when it carries one round of successful
transmissions.  Slotted ALOHA uses a single fixed duration; the two
carrier-sensing modes build their durations out of PHY/MAC timing numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

ADDRESS_BITS = 48


@dataclass(frozen=True)
class PhyTimings:
    """PHY/MAC timing parameter set.

    Defaults are the 802.11a-flavored values used throughout the experiments:
    payload 8184 bits, MAC header 272 bits, PHY overhead 26 us, ACK 112 bits,
    RTS 160 bits, CTS 112 bits, basic rate 6 Mb/s, data rate 54 Mb/s,
    sigma 9 us, SIFS 10 us.  DIFS defaults to SIFS + 2*sigma = 28 us (the
    standard DCF relation) and the propagation delay delta to 1 us; both are
    overridable because the model treats them symbolically.
    """

    sigma: float = 9e-6
    sifs: float = 10e-6
    difs: float = 28e-6
    delta: float = 1e-6
    phy_overhead: float = 26e-6
    mac_header_bits: float = 272.0
    ack_bits: float = 112.0
    rts_bits: float = 160.0
    cts_bits: float = 112.0
    payload_bits: float = 8184.0
    data_rate: float = 54e6
    basic_rate: float = 6e6

    def __post_init__(self):
        for field in ("sigma", "sifs", "difs", "delta", "phy_overhead",
                      "mac_header_bits", "ack_bits", "rts_bits", "cts_bits"):
            if getattr(self, field) < 0:
                raise ValueError(f"{field} must be nonnegative")
        if self.data_rate <= 0 or self.basic_rate <= 0:
            raise ValueError("rates must be positive")
        if self.payload_bits <= 0:
            raise ValueError("payload_bits must be positive")

    def with_(self, **kw) -> "PhyTimings":
        return replace(self, **kw)


@dataclass(frozen=True)
class SlotDurations:
    """The (T_i, T_c, T_s) triple, in seconds."""

    t_idle: float
    t_coll: float
    t_succ: float

    def __post_init__(self):
        if min(self.t_idle, self.t_coll, self.t_succ) <= 0:
            raise ValueError("slot durations must be positive")


def aloha_slots(payload_bits: float = 8184.0, rate: float = 54e6) -> SlotDurations:
    """Slotted ALOHA: every slot lasts one packet time L/R."""
    if payload_bits <= 0 or rate <= 0:
        raise ValueError("payload_bits and rate must be positive")
    t = payload_bits / rate
    return SlotDurations(t, t, t)


def _header_time(t: PhyTimings) -> float:
    # PHY preamble plus MAC header at the data rate
    return t.phy_overhead + t.mac_header_bits / t.data_rate


def basic_slots(t: PhyTimings) -> SlotDurations:
    """Basic access: data frame heard in full on collision, ACK on success."""
    h = _header_time(t)
    ack = t.phy_overhead + t.ack_bits / t.data_rate
    payload = t.payload_bits / t.data_rate
    t_coll = h + payload + t.difs + t.delta
    t_succ = h + payload + t.sifs + t.delta + ack + t.difs + t.delta
    return SlotDurations(t.sigma, t_coll, t_succ)


def rtscts_slots(t: PhyTimings, cts_address_fields: int = 1) -> SlotDurations:
    """RTS/CTS access: collisions cost only the RTS exchange.

    Control frames ride the basic rate.  The CTS keeps its legacy length by
    default; cts_address_fields > 1 grows it by 48-bit receiver addresses for
    sensitivity studies of the multi-receiver grant.
    """
    if cts_address_fields < 1:
        raise ValueError("cts_address_fields must be >= 1")
    h = _header_time(t)
    ack = t.phy_overhead + t.ack_bits / t.data_rate
    rts = t.phy_overhead + t.rts_bits / t.basic_rate
    cts_bits = t.cts_bits + (cts_address_fields - 1) * ADDRESS_BITS
    cts = t.phy_overhead + cts_bits / t.basic_rate
    payload = t.payload_bits / t.data_rate
    t_coll = rts + t.difs + t.delta
    t_succ = (rts + t.sifs + t.delta + cts + t.sifs + t.delta
              + h + payload + t.sifs + t.delta + ack + t.difs + t.delta)
    return SlotDurations(t.sigma, t_coll, t_succ)


def rtscts_phases(t: PhyTimings, cts_address_fields: int = 1) -> dict[str, float]:
    """Component times inside one successful RTS/CTS round.

    Keys: rts, cts, data, ack, and ifs (all interframe spaces and
    propagation delays).  Values sum to rtscts_slots(...).t_succ.
    """
    if cts_address_fields < 1:
        raise ValueError("cts_address_fields must be >= 1")
    cts_bits = t.cts_bits + (cts_address_fields - 1) * ADDRESS_BITS
    return {
        "rts": t.phy_overhead + t.rts_bits / t.basic_rate,
        "cts": t.phy_overhead + cts_bits / t.basic_rate,
        "data": _header_time(t) + t.payload_bits / t.data_rate,
        "ack": t.phy_overhead + t.ack_bits / t.data_rate,
        "ifs": 3 * t.sifs + t.difs + 4 * t.delta,
    }


def slots_for_mode(mode: str, t: PhyTimings, cts_address_fields: int = 1) -> SlotDurations:
    """Durations for an access mode name: aloha, basic, or rtscts."""
    if mode == "aloha":
        return aloha_slots(t.payload_bits, t.data_rate)
    if mode == "basic":
        return basic_slots(t)
    if mode == "rtscts":
        return rtscts_slots(t, cts_address_fields)
    raise ValueError(f"unknown access mode {mode!r}")
