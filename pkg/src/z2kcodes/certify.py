"""Certificates for self-orthogonality, self-duality, and Type II codes.

A code over Z_2k is Type II when it is self-dual and every codeword has
Euclidean weight divisible by 4k. Divisibility over the whole span follows
from the generators alone: wt_E(x + y) = wt_E(x) + wt_E(y) + 2<x, y>
modulo 4k, so pairwise orthogonality makes the cross term vanish and
doubly-even generators propagate to every codeword. The certificate
records the generator-level checks; no enumeration is performed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .rings import DomainError, Modulus, ZVector, euclidean_weight, inner_product
from .model import GeneratorMatrix, StandardForm, code_size


@dataclass(frozen=True)
class TypeIICertificate:
    """Generator-level evidence that a code is Type II.

    valid (orthogonal rows + doubly-even row weights) is exactly
    equivalent to every codeword weight being divisible by 4k; is_type_ii
    additionally requires the self-dual cardinality.
    """

    pairwise_inner_products_zero: bool
    row_weights_div_4k: bool
    self_dual_size: bool
    witness_row: Optional[int] = None  # 1-based row with wt_E not div 4k
    witness_pair: Optional[Tuple[int, int]] = None  # 1-based rows, <i,j> != 0

    @property
    def valid(self) -> bool:
        return self.pairwise_inner_products_zero and self.row_weights_div_4k

    @property
    def is_type_ii(self) -> bool:
        return self.valid and self.self_dual_size


def _rows_of(code: Union[StandardForm, GeneratorMatrix]) -> GeneratorMatrix:
    return code.matrix if isinstance(code, StandardForm) else code


def is_self_orthogonal(code: Union[StandardForm, GeneratorMatrix]) -> bool:
    """All generator pairs, self-pairs included, orthogonal mod 2k."""
    g = _rows_of(code)
    two_k = g.modulus.two_k
    gram = g.array @ g.array.T % two_k
    return not gram.any()


def is_self_dual(code: StandardForm, size: Optional[int] = None) -> bool:
    """Self-orthogonal with |C|^2 = (2k)^n.

    For a power-of-two modulus the size comes from the type profile;
    otherwise the caller must supply the cardinality.
    """
    if size is None:
        if code.modulus.m is None:
            raise DomainError(
                f"cannot derive a code size over {code.modulus}; pass size=")
        size = code.size()
    return is_self_orthogonal(code) and size * size == code.modulus.two_k ** code.n


def certify_type_II(code: Union[StandardForm, GeneratorMatrix],
                    size: Optional[int] = None) -> TypeIICertificate:
    """Check the generator conditions for Type II-ness and report witnesses."""
    g = _rows_of(code)
    mod = g.modulus
    two_k = mod.two_k
    four_k = 2 * two_k
    rows = g.rows()
    witness_row = None
    for i, r in enumerate(rows, start=1):
        if euclidean_weight(r) % four_k:
            witness_row = i
            break
    witness_pair = None
    for i in range(len(rows)):
        for j in range(i, len(rows)):
            if inner_product(rows[i], rows[j]):
                witness_pair = (i + 1, j + 1)
                break
        if witness_pair:
            break
    if size is None and isinstance(code, StandardForm) and mod.m is not None:
        size = code.size()
    self_dual = size is not None and size * size == two_k ** g.n
    return TypeIICertificate(
        pairwise_inner_products_zero=witness_pair is None,
        row_weights_div_4k=witness_row is None,
        self_dual_size=self_dual,
        witness_row=witness_row,
        witness_pair=witness_pair,
    )


def extremal_bound(n: int, k: int) -> int:
    """Largest minimum Euclidean weight of a Type II code: 4k(floor(n/24) + 1).

    Defined for lengths divisible by eight; for k >= 3 the formula is only
    a bound while floor(n/24) <= k - 2.
    """
    if k < 1:
        raise DomainError(f"half-modulus k={k} must be positive")
    if n <= 0 or n % 8:
        raise DomainError(f"length {n} is not a positive multiple of 8")
    blocks = n // 24
    if k >= 3 and blocks > k - 2:
        raise DomainError(
            f"bound undefined at n={n}, k={k}: floor(n/24)={blocks} > k-2")
    return 4 * k * blocks + 4 * k


def is_extremal(sf: StandardForm, min_weight: int) -> bool:
    """Whether a verified minimum Euclidean weight meets the bound exactly."""
    return min_weight == extremal_bound(sf.n, sf.modulus.k)
