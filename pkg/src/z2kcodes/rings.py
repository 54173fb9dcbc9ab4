"""Exact arithmetic on vectors over the ring of integers modulo 2k.

Coordinates are always stored reduced to [0, 2k). Euclidean weight of a
coordinate x is min(x^2, (2k-x)^2); the weight of a vector is the sum over
its coordinates. Positions in all public interfaces are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Weight accumulation stays inside int64 for lengths up to this bound.
MAX_LENGTH = 64


class DimensionError(ValueError):
    """Lengths or moduli of the operands disagree."""


class DomainError(ValueError):
    """An argument lies outside its documented domain."""


@dataclass(frozen=True)
class Modulus:
    """Ring size 2k. Must be even and at least 2.

    The size 2 is admitted so that binary residue codes can be expressed
    in the same vector type as their parents.
    """

    two_k: int

    def __post_init__(self):
        if self.two_k < 2 or self.two_k % 2 != 0:
            raise DomainError(f"ring size must be even and >= 2, got {self.two_k}")

    @property
    def k(self) -> int:
        return self.two_k // 2

    @property
    def m(self):
        """Exponent with 2^m = two_k, or None when two_k is not a power of two."""
        e = self.two_k.bit_length() - 1
        return e if (1 << e) == self.two_k else None

    def euclidean_table(self) -> np.ndarray:
        """Per-residue Euclidean weights: table[i] = min(i^2, (2k-i)^2)."""
        i = np.arange(self.two_k, dtype=np.int64)
        return np.minimum(i * i, (self.two_k - i) ** 2)

    def __repr__(self):
        return f"Modulus({self.two_k})"


Z2 = Modulus(2)
Z4 = Modulus(4)
Z8 = Modulus(8)


@dataclass(frozen=True)
class ZVector:
    """An immutable length-n vector with coordinates reduced modulo 2k."""

    modulus: Modulus
    coords: tuple

    def __init__(self, modulus: Modulus, coords: Iterable[int]):
        reduced = tuple(int(c) % modulus.two_k for c in coords)
        if len(reduced) > MAX_LENGTH:
            raise DimensionError(f"length {len(reduced)} exceeds supported {MAX_LENGTH}")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coords", reduced)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    @staticmethod
    def zero(modulus: Modulus, n: int) -> "ZVector":
        return ZVector(modulus, (0,) * n)


def _check_pair(x: ZVector, y: ZVector):
    if x.modulus != y.modulus or len(x) != len(y):
        raise DimensionError(
            f"operands disagree: ({x.modulus}, n={len(x)}) vs ({y.modulus}, n={len(y)})"
        )


def euclidean_weight(x: ZVector) -> int:
    """Sum of min(x_i^2, (2k-x_i)^2) over all coordinates."""
    two_k = x.modulus.two_k
    return int(sum(min(c * c, (two_k - c) ** 2) for c in x.coords))


def hamming_weight(x: ZVector) -> int:
    """Number of nonzero coordinates."""
    return sum(1 for c in x.coords if c != 0)


def inner_product(x: ZVector, y: ZVector) -> int:
    """Dot product reduced modulo 2k."""
    _check_pair(x, y)
    return int(sum(a * b for a, b in zip(x.coords, y.coords)) % x.modulus.two_k)


def count_occurrences(x: ZVector, i: int) -> int:
    """Number of coordinates equal to the residue i."""
    if not 0 <= i < x.modulus.two_k:
        raise DomainError(f"residue {i} out of range for {x.modulus}")
    return sum(1 for c in x.coords if c == i)


def support_of(x: ZVector, i: int) -> frozenset:
    """1-based positions whose coordinate equals the residue i."""
    if not 0 <= i < x.modulus.two_k:
        raise DomainError(f"residue {i} out of range for {x.modulus}")
    return frozenset(p + 1 for p, c in enumerate(x.coords) if c == i)


def reduce_vector(x: ZVector, new_modulus: Modulus) -> ZVector:
    """Coordinatewise reduction to a modulus dividing the current one."""
    if x.modulus.two_k % new_modulus.two_k != 0:
        raise DomainError(
            f"{new_modulus} does not divide {x.modulus}; cannot reduce"
        )
    return ZVector(new_modulus, (c % new_modulus.two_k for c in x.coords))


def vector_combine(coeffs: Sequence[int], rows: Sequence[ZVector]) -> ZVector:
    """Linear combination sum(coeffs[i] * rows[i]) reduced modulo 2k."""
    if len(coeffs) != len(rows):
        raise DimensionError(f"{len(coeffs)} coefficients for {len(rows)} rows")
    if not rows:
        raise DimensionError("need at least one row to combine")
    mod = rows[0].modulus
    n = len(rows[0])
    for r in rows[1:]:
        _check_pair(rows[0], r)
    acc = [0] * n
    for c, row in zip(coeffs, rows):
        c = int(c)
        for j, v in enumerate(row.coords):
            acc[j] += c * v
    return ZVector(mod, acc)
