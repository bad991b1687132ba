"""Multi-receiver CTS/ACK control frames.

When the channel can decode up to M simultaneous packets, the grant and the
acknowledgement must name every admitted transmitter, so the legacy
single-address CTS/ACK grows a list of receiver address fields.  Layout
(big-endian): 2-byte frame control, 2-byte duration, count x 6-byte receiver
addresses, 1-byte recipient count, 4-byte FCS placeholder.  A one-address
frame is byte-identical to the layout an M = 1 device would emit.
"""

from __future__ import annotations

import struct
from typing import Sequence

FC_CTS = 0x00C4
FC_ACK = 0x00D4
_ADDR_BYTES = 6
_BASE_BYTES = 2 + 2 + 1 + 4  # frame control + duration + count + FCS


class FrameError(ValueError):
    pass


def _encode_control(fc: int, addresses: Sequence[int], m: int,
                    duration_us: int) -> bytes:
    if not 1 <= len(addresses) <= m:
        raise FrameError(f"address count {len(addresses)} outside 1..{m}")
    if not 0 <= duration_us < 1 << 16:
        raise FrameError("duration does not fit in 16 bits")
    out = bytearray(struct.pack(">HH", fc, duration_us))
    for a in addresses:
        if not 0 <= a < 1 << 48:
            raise FrameError(f"address {a:#x} is not a 48-bit identifier")
        out += a.to_bytes(_ADDR_BYTES, "big")
    out.append(len(addresses))
    out += b"\x00\x00\x00\x00"  # FCS placeholder
    return bytes(out)


def _decode_control(frame: bytes, expect_fc: int,
                    m: int | None) -> tuple[list[int], int]:
    if len(frame) < _BASE_BYTES + _ADDR_BYTES:
        raise FrameError("frame too short")
    body = len(frame) - _BASE_BYTES
    if body % _ADDR_BYTES != 0:
        raise FrameError("frame length does not align with 6-byte addresses")
    count = body // _ADDR_BYTES
    fc, duration_us = struct.unpack(">HH", frame[:4])
    if fc != expect_fc:
        raise FrameError(f"frame control {fc:#06x}, expected {expect_fc:#06x}")
    declared = frame[4 + count * _ADDR_BYTES]
    if declared != count:
        raise FrameError(f"count field {declared} disagrees with length ({count})")
    if m is not None and count > m:
        raise FrameError(f"{count} addresses exceeds capability {m}")
    addresses = [int.from_bytes(frame[4 + i * _ADDR_BYTES: 4 + (i + 1) * _ADDR_BYTES], "big")
                 for i in range(count)]
    return addresses, duration_us


def encode_cts(addresses: Sequence[int], m: int, duration_us: int = 0) -> bytes:
    """Grant frame naming every admitted transmitter (1..m addresses)."""
    return _encode_control(FC_CTS, addresses, m, duration_us)


def decode_cts(frame: bytes, m: int | None = None) -> list[int]:
    """Addresses of a grant frame; validates layout and count field."""
    return _decode_control(frame, FC_CTS, m)[0]


def encode_ack(addresses: Sequence[int], m: int, duration_us: int = 0) -> bytes:
    """Acknowledgement naming every decoded transmitter; same layout."""
    return _encode_control(FC_ACK, addresses, m, duration_us)


def decode_ack(frame: bytes, m: int | None = None) -> list[int]:
    return _decode_control(frame, FC_ACK, m)[0]
