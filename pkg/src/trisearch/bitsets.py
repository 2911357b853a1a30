"""Bit-mask helpers.

Sets of dense element ids are carried as plain Python ints (bit i set means
element i is present), which keeps intersections and subset tests cheap even
for contexts with hundreds of thousands of cells.
"""

from __future__ import annotations

from typing import Iterable

# bit positions set in each possible byte value, for fast mask decoding
_BYTE_BITS = tuple(tuple(b for b in range(8) if value >> b & 1) for value in range(256))


def mask_from_ids(ids: Iterable[int]) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_to_ids(mask: int) -> list[int]:
    """Decode a mask into a sorted list of bit positions."""
    if mask < 0:
        raise ValueError("negative mask")
    if mask == 0:
        return []
    out: list[int] = []
    data = mask.to_bytes((mask.bit_length() + 7) // 8, "little")
    append = out.extend
    for byte_index, byte in enumerate(data):
        if byte:
            base = byte_index << 3
            append(base + b for b in _BYTE_BITS[byte])
    return out
