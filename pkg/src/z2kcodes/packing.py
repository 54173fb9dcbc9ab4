"""Bit-packed vector representations and table-driven weight lookup.

Coordinates pack into 64-bit lanes at 1, 2, or 4 bits each for moduli
2, 4, and 8; other moduli use the generic unpacked paths. Weights of a
packed word come from 16-bit-chunk lookup tables, and coefficient scans
walk a mixed-radix reflected Gray sequence so each step is one packed
row addition.
"""

from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from .rings import DomainError

BITS_PER_COORD = {2: 1, 4: 2, 8: 4}

_LANE_MASK_Z4 = np.uint64(0x5555555555555555)
_LANE_MASK_Z8 = np.uint64(0x7777777777777777)


def packable(two_k: int) -> bool:
    return two_k in BITS_PER_COORD


def lanes_for(n: int, two_k: int) -> int:
    per = 64 // BITS_PER_COORD[two_k]
    return (n + per - 1) // per


def pack_word(vec: Sequence[int], two_k: int) -> np.ndarray:
    bits = BITS_PER_COORD[two_k]
    per = 64 // bits
    n = len(vec)
    out = np.zeros(lanes_for(n, two_k), dtype=np.uint64)
    for i, c in enumerate(vec):
        out[i // per] |= np.uint64(int(c) % two_k) << np.uint64(bits * (i % per))
    return out


def pack_rows(arr: np.ndarray, two_k: int) -> np.ndarray:
    arr = np.asarray(arr)
    out = np.zeros((arr.shape[0], lanes_for(arr.shape[1], two_k)),
                   dtype=np.uint64)
    for r in range(arr.shape[0]):
        out[r] = pack_word(arr[r], two_k)
    return out


def unpack_word(lanes: np.ndarray, two_k: int, n: int) -> np.ndarray:
    bits = BITS_PER_COORD[two_k]
    per = 64 // bits
    mask = np.uint64((1 << bits) - 1)
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        out[i] = int((lanes[i // per] >> np.uint64(bits * (i % per))) & mask)
    return out


def add_packed(a, b, two_k: int):
    """Lanewise sum mod two_k of packed operands (arrays broadcast)."""
    if two_k == 2:
        return a ^ b
    if two_k == 4:
        return a ^ b ^ ((a & b & _LANE_MASK_Z4) << np.uint64(1))
    if two_k == 8:
        # nibbles hold values <= 7, so lane sums never carry across
        return (a + b) & _LANE_MASK_Z8
    raise DomainError(f"no packed form for modulus {two_k}")


def _per_coord_weights(two_k: int, kind: str) -> np.ndarray:
    vals = np.arange(two_k, dtype=np.int64)
    if kind == "euclidean":
        return np.minimum(vals * vals, (two_k - vals) ** 2)
    if kind == "hamming":
        return (vals != 0).astype(np.int64)
    raise DomainError(f"unknown weight kind {kind!r}")


def chunk_weight_table(two_k: int, kind: str = "euclidean") -> np.ndarray:
    """Weight of the coords encoded in a 16-bit chunk of a packed lane.

    Slots above two_k (possible for 2k=8, where a nibble spans 0..15)
    never occur in valid packed words and score zero.
    """
    if not packable(two_k):
        raise DomainError(f"modulus {two_k} has no packed representation")
    bits = BITS_PER_COORD[two_k]
    per16 = 16 // bits
    w = np.zeros(1 << bits, dtype=np.int64)
    w[:two_k] = _per_coord_weights(two_k, kind)
    tab = np.zeros(1, dtype=np.int64)
    for _ in range(per16):
        tab = (w[:, None] + tab[None, :]).ravel()
    return tab


def popcount16_table() -> np.ndarray:
    t = np.arange(65536, dtype=np.int64)
    t = (t & 0x5555) + ((t >> 1) & 0x5555)
    t = (t & 0x3333) + ((t >> 2) & 0x3333)
    t = (t & 0x0F0F) + ((t >> 4) & 0x0F0F)
    return ((t & 0xFF) + (t >> 8)).astype(np.int64)


def gray_state(radices: Sequence[int], index: int) -> Tuple[np.ndarray, np.ndarray]:
    """Digits and step directions of the reflected Gray walk at an index.

    Digit i of the Gray word is the standard digit when the sum of the
    higher Gray digits is even, and reflected otherwise; the same parity
    fixes the direction digit i is currently sweeping.
    """
    K = len(radices)
    std = []
    idx = index
    for r in radices:
        std.append(idx % r)
        idx //= r
    digits = np.zeros(K, dtype=np.int64)
    dirs = np.zeros(K, dtype=np.int64)
    higher_sum = 0
    for i in reversed(range(K)):
        if higher_sum % 2 == 0:
            digits[i] = std[i]
            dirs[i] = 1
        else:
            digits[i] = radices[i] - 1 - std[i]
            dirs[i] = -1
        higher_sum += digits[i]
    return digits, dirs


def packed_weight(lanes: np.ndarray, tab: np.ndarray) -> int:
    w = 0
    for lane in lanes:
        x = int(lane)
        w += int(tab[x & 0xFFFF]) + int(tab[(x >> 16) & 0xFFFF]) \
            + int(tab[(x >> 32) & 0xFFFF]) + int(tab[(x >> 48) & 0xFFFF])
    return w
