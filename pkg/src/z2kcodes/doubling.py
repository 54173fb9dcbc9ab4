"""The doubling construction for Type II codes and its inverse.

Given a Type II code C over Z_2k and a vector ku with all coordinates in
{0, k} and ku not in C, the words of C orthogonal to ku form an index-2
subgroup C0, and C0 + <ku> is again Type II. Over Z_2^m the subgroup and
the new generator matrix fall out of a standard form directly: rows pair
with ku to 0 or 2^(m-1), the odd-pairing rows are summed against a pivot
row, and ku itself joins the generators. Undoubling reverses the step:
dropping the ku generator from the doubled code leaves C0, and the two
proper cosets of C0 in C0-perp (besides the ku one) are the only places
the source code can live.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Sequence, Union

import numpy as np

from .rings import (
    DimensionError,
    DomainError,
    Modulus,
    ZVector,
    count_occurrences,
    euclidean_weight,
    inner_product,
    support_of,
)
from .model import (
    GeneratorMatrix,
    StandardForm,
    TypeProfile,
    coefficient_vector,
    contains,
    dual,
    standardize,
)
from .certify import certify_type_II

# Rejection-sampling caps for the random free-seed search.
_ROW_TRIES = 200_000
_RESTARTS = 64


@dataclass(frozen=True)
class DoublingVector:
    """A vector ku with coordinates in {0, k}, shaped for doubling.

    Construction enforces the coordinate alphabet and the parity rule on
    n_k(ku): divisible by four when k is odd, even when k = 2 mod 4, and
    unconstrained when 4 divides k. half_support is the 1-based set of
    positions carrying k.
    """

    vec: ZVector
    half_support: FrozenSet[int]

    def __init__(self, vec: ZVector):
        k = vec.modulus.k
        if k < 2:
            raise DomainError(f"doubling needs ring size >= 4, got {vec.modulus}")
        if any(c not in (0, k) for c in vec.coords):
            raise DomainError(f"coordinates must all be 0 or {k}")
        nk = count_occurrences(vec, k)
        if k % 2 == 1 and nk % 4:
            raise DomainError(
                f"odd k={k} requires n_k divisible by four, got {nk}")
        if k % 4 == 2 and nk % 2:
            raise DomainError(f"k={k} = 2 mod 4 requires n_k even, got {nk}")
        object.__setattr__(self, "vec", vec)
        object.__setattr__(self, "half_support", support_of(vec, k))


@dataclass(frozen=True)
class DoubleResult:
    """Outcome of one doubling step.

    subcode_C0 is the index-2 subgroup of the source orthogonal to the
    vector; doubled is C0 extended by the vector; both are standard forms
    in the source's original coordinates.
    """

    subcode_C0: StandardForm
    doubled: StandardForm
    used_vector: DoublingVector


def _as_doubling_vector(dv: Union[DoublingVector, ZVector]) -> DoublingVector:
    return dv if isinstance(dv, DoublingVector) else DoublingVector(dv)


def validate_doubling_vector(sf: StandardForm, ku: ZVector,
                             normalize: bool = False) -> DoublingVector:
    """Check ku (original coordinates) against a self-orthogonal code.

    Rejects coordinate or parity violations, membership ku in C, and a
    code whose generators fail orthogonality or weight divisibility by
    4k. Self-duality is not demanded here: the vector may equally be
    validated against the index-2 subcode of an already doubled code.
    With normalize=True the result is shifted by the unique order-2
    codeword agreeing with ku on the pivot coordinates, zeroing the
    standard-form prefix; the shifted vector generates the same double.
    """
    if ku.modulus != sf.modulus or len(ku) != sf.n:
        raise DimensionError("vector does not match the code's modulus or length")
    dv = DoublingVector(ku)
    if contains(sf, ku):
        raise DomainError("vector lies in the code; doubling needs ku outside C")
    cert = certify_type_II(sf)
    if not cert.valid:
        raise DomainError(
            "code fails its generator certificate: witness row "
            f"{cert.witness_row}, witness pair {cert.witness_pair}")
    if not normalize:
        return dv
    m = sf.modulus.m
    two_k = sf.modulus.two_k
    half = two_k // 2
    M = sf.matrix.array
    K = sf.num_rows
    resid = ku.array()[sf._perm_index()]
    # The order-2 codewords are spanned by (2^(m-j))-multiples of block-j
    # rows, upper triangular on the pivots; forward substitution matches
    # the prefix one pivot at a time.
    for i, scale in enumerate(sf.row_scales()):
        if resid[i] == half:
            resid = (resid - (half // scale) * M[i]) % two_k
        assert resid[i] == 0, "prefix entry not cleared"
    out = np.empty(sf.n, dtype=np.int64)
    out[sf._perm_index()] = resid
    return DoublingVector(ZVector(sf.modulus, out))


def double_code(sf: StandardForm, dv: Union[DoublingVector, ZVector],
                pivot: Optional[int] = None) -> DoubleResult:
    """Double a Type II code over Z_2^m by a prefix-normalized vector.

    Splits the standard-form rows by their pairing with the vector,
    replaces each odd-pairing row G_j by G_p + G_j for a pivot row G_p
    (the pivot's own sum 2 G_p included), and adjoins the vector. pivot
    is a 1-based row index and must pair oddly; default is the first
    such row. The resulting code does not depend on the choice.
    """
    m = sf.modulus.m
    if m is None or m < 2:
        raise DomainError(
            f"matrix doubling needs modulus 2^m with m >= 2, got {sf.modulus}")
    dv = _as_doubling_vector(dv)
    dv = validate_doubling_vector(sf, dv.vec)
    if not certify_type_II(sf).is_type_ii:
        raise DomainError("matrix doubling needs a self-dual (Type II) source")
    ku_std = sf.from_original(dv.vec)
    if any(ku_std.coords[i] for i in range(sf.num_rows)):
        raise DomainError(
            "vector is nonzero on a pivot coordinate; normalize it first")
    rows = sf.original_matrix().rows()
    odd = [i for i, r in enumerate(rows) if inner_product(r, dv.vec)]
    if not odd:
        raise RuntimeError(
            "no generator pairs oddly with the vector; inputs cannot have "
            "been a Type II code with ku outside it")
    if pivot is None:
        p = odd[0]
    else:
        p = pivot - 1
        if p not in odd:
            raise DomainError(f"pivot row {pivot} pairs evenly with the vector")
    even_rows = [rows[i] for i in range(len(rows)) if i not in odd]
    folded = [ZVector(sf.modulus, (rows[p].array() + rows[j].array()))
              for j in odd]
    c0 = standardize(GeneratorMatrix.from_rows(
        folded + even_rows, n=sf.n, modulus=sf.modulus))
    doubled = standardize(GeneratorMatrix.from_rows(
        folded + even_rows + [dv.vec], n=sf.n, modulus=sf.modulus))
    ks = list(sf.profile.ks)
    ks[0] -= 1
    ks[1] += 1
    ks[m - 1] += 1
    if doubled.profile != TypeProfile(ks):
        raise RuntimeError(
            f"doubled profile {doubled.profile.ks} differs from expected "
            f"{tuple(ks)}; inputs violate the construction's premises")
    assert doubled.size() == sf.size(), "doubling must preserve cardinality"
    cert = certify_type_II(doubled)
    if not cert.is_type_ii:
        raise RuntimeError("doubled code failed its Type II certificate")
    return DoubleResult(subcode_C0=c0, doubled=doubled, used_vector=dv)


def double_by_cosets(words: Iterable[ZVector],
                     dv: Union[DoublingVector, ZVector]) -> FrozenSet[ZVector]:
    """Double an explicitly listed code over any even modulus.

    Keeps the words pairing to zero with the vector and adds the vector
    to each; works directly on word sets, so it covers moduli without a
    standard form. The caller supplies the full word set of a Type II
    code not containing the vector.
    """
    dv = _as_doubling_vector(dv)
    ku = dv.vec
    pool = list(words)
    for w in pool:
        if w.modulus != ku.modulus or len(w) != len(ku):
            raise DimensionError("word does not match the vector's modulus or length")
    if any(w.coords == ku.coords for w in pool):
        raise DomainError("vector lies in the code; doubling needs ku outside C")
    kept = [w for w in pool if inner_product(w, ku) == 0]
    if len(kept) == len(pool):
        raise RuntimeError(
            "every word pairs to zero with the vector; inputs cannot have "
            "been a self-dual code with ku outside it")
    if 2 * len(kept) != len(pool):
        raise DomainError("orthogonal words do not form half the code")
    two_k = ku.modulus.two_k
    karr = ku.array()
    shifted = [ZVector(ku.modulus, (w.array() + karr) % two_k) for w in kept]
    return frozenset(kept) | frozenset(shifted)


def undouble(sf: StandardForm, dv: Union[DoublingVector, ZVector],
             target_profile: TypeProfile) -> FrozenSet[StandardForm]:
    """Candidate source codes of a doubled Type II code.

    Removes the generator carrying the vector (the standard-form row of
    the deepest block whose coefficient in the vector's expansion is
    odd), leaving the index-2 subgroup C0. The quotient of C0-perp by C0
    has order four; besides C0 + vector, its two remaining cosets w and
    w + vector are the only possible complements, so each union
    C0 + (C0 + w') is kept when it is additively closed, Type II, and of
    the requested profile. An empty set means no candidate passed.
    """
    dv = _as_doubling_vector(dv)
    m = sf.modulus.m
    if m is None or m < 2:
        raise DomainError(
            f"undoubling needs modulus 2^m with m >= 2, got {sf.modulus}")
    cert = certify_type_II(sf)
    if not cert.is_type_ii:
        raise DomainError("code to undouble is not certifiably Type II")
    coeffs = coefficient_vector(sf, dv.vec)
    if coeffs is None:
        raise DomainError("vector is not a codeword of the doubled code")
    blocks = sf.row_blocks()
    drop = next((i for i in range(sf.num_rows)
                 if blocks[i] == m and coeffs[i] % 2), None)
    if drop is None:
        raise DomainError(
            "vector does not split the code: no deepest-block generator "
            "carries it with an odd coefficient")
    rows = list(sf.original_matrix().rows())
    del rows[drop]
    c0 = standardize(GeneratorMatrix.from_rows(rows, n=sf.n, modulus=sf.modulus))
    assert 2 * c0.size() == sf.size(), "dropping one generator must halve the code"
    perp = dual(c0)
    two_k = sf.modulus.two_k
    dvarr = dv.vec.array()

    def in_c0_or_shift(x: ZVector) -> bool:
        back = ZVector(x.modulus, (x.array() - dvarr) % two_k)
        return contains(c0, x) or contains(c0, back)

    w = next((r for r in perp.original_matrix().rows()
              if not in_c0_or_shift(r)), None)
    assert w is not None, "C0-perp generators cannot all land in C0 + <vector>"
    out = set()
    for shift in (0, 1):
        cand_vec = ZVector(sf.modulus, (w.array() + shift * dvarr) % two_k)
        cand = standardize(GeneratorMatrix.from_rows(
            rows + [cand_vec], n=sf.n, modulus=sf.modulus))
        if cand.size() != 2 * c0.size():
            continue  # coset union not closed under addition
        if not certify_type_II(cand).is_type_ii:
            continue
        if cand.profile != target_profile:
            continue
        out.add(cand)
    return frozenset(out)


def find_free_type_ii_seed(seed: int = 0, n: int = 8) -> StandardForm:
    """Randomized search for a free Type II code of the given length over Z8.

    Draws the right half of [I | A] row by row, keeping rows whose self
    pairing is -1, whose full row weight is divisible by 16, and which
    pair to zero with the rows already kept; dead ends restart the draw.
    """
    if n % 8 or n < 8:
        raise DomainError(f"length {n} is not a positive multiple of 8")
    h = n // 2
    rng = np.random.Generator(np.random.Philox(seed))
    table = Modulus(8).euclidean_table()
    for _ in range(_RESTARTS):
        kept: list = []
        for _ in range(h):
            for _ in range(_ROW_TRIES):
                cand = rng.integers(0, 8, size=h)
                if int(cand @ cand) % 8 != 7:
                    continue
                if (1 + int(table[cand].sum())) % 16:
                    continue
                if any(int(cand @ prev) % 8 for prev in kept):
                    continue
                kept.append(cand)
                break
            else:
                break
        if len(kept) < h:
            continue
        g = np.hstack([np.eye(h, dtype=np.int64), np.array(kept, dtype=np.int64)])
        sf = standardize(GeneratorMatrix(Modulus(8), g))
        if certify_type_II(sf).is_type_ii:
            return sf
    raise RuntimeError(f"no free Type II code of length {n} found; vary the seed")
