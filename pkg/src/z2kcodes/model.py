"""Codes presented by generator matrices over Z_{2^m}.

A standard form is a row-reduced presentation: row block j carries a
leading 2^(j-1) * identity on its pivot columns, zeros to the left, and
multiples of 2^(j-1) to the right. The tuple (k_1, ..., k_m) of block
sizes is the type profile of the code and determines its cardinality.
Column swaps performed during reduction are recorded as a permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .rings import DimensionError, DomainError, Modulus, ZVector

# Default cap on enumerated codewords per call.
DEFAULT_BUDGET = 2**32


class CapacityError(Exception):
    """An enumeration would exceed its budget; partition the run instead."""


@dataclass(frozen=True)
class GeneratorMatrix:
    """Rows spanning a code. Rows may be redundant; the code is the span."""

    modulus: Modulus
    array: np.ndarray  # shape (rows, n), entries reduced mod two_k

    def __init__(self, modulus: Modulus, array):
        arr = np.asarray(array, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2d row matrix, got shape {arr.shape}")
        if arr.shape[1] > 64:
            raise DimensionError(f"length {arr.shape[1]} exceeds supported 64")
        arr = np.mod(arr, modulus.two_k)
        arr.setflags(write=False)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "array", arr)

    @classmethod
    def from_rows(cls, rows: Sequence[ZVector], n: Optional[int] = None,
                  modulus: Optional[Modulus] = None) -> "GeneratorMatrix":
        if rows:
            modulus = rows[0].modulus
            n = len(rows[0])
            for r in rows:
                if r.modulus != modulus or len(r) != n:
                    raise DimensionError("rows disagree in modulus or length")
            data = np.array([r.coords for r in rows], dtype=np.int64)
        else:
            if n is None or modulus is None:
                raise DimensionError("empty matrix needs explicit length and modulus")
            data = np.zeros((0, n), dtype=np.int64)
        return cls(modulus, data)

    @property
    def n(self) -> int:
        return self.array.shape[1]

    @property
    def num_rows(self) -> int:
        return self.array.shape[0]

    def rows(self) -> Tuple[ZVector, ...]:
        return tuple(ZVector(self.modulus, r) for r in self.array)

    def __eq__(self, other):
        return (isinstance(other, GeneratorMatrix)
                and self.modulus == other.modulus
                and self.array.shape == other.array.shape
                and bool(np.array_equal(self.array, other.array)))

    def __hash__(self):
        return hash((self.modulus, self.array.shape, self.array.tobytes()))


@dataclass(frozen=True)
class TypeProfile:
    """Block sizes (k_1, ..., k_m); the code has prod (2^(m-j+1))^(k_j) words."""

    ks: Tuple[int, ...]

    def __init__(self, ks: Sequence[int]):
        object.__setattr__(self, "ks", tuple(int(k) for k in ks))
        if any(k < 0 for k in self.ks):
            raise DomainError(f"negative block size in {self.ks}")

    @property
    def total_rows(self) -> int:
        return sum(self.ks)


def code_size(profile: TypeProfile, modulus: Modulus) -> int:
    """Cardinality prod_j (2^(m-j+1))^(k_j) of a code with the given profile."""
    m = modulus.m
    if m is None:
        raise DomainError(f"{modulus} is not a power of two")
    if len(profile.ks) != m:
        raise DomainError(f"profile {profile.ks} does not have {m} entries")
    size = 1
    for j, kj in enumerate(profile.ks, start=1):
        size *= (2 ** (m - j + 1)) ** kj
    return size


@dataclass(frozen=True)
class StandardForm:
    """A standardized presentation: matrix, column permutation, type profile.

    perm is 1-based: standardized column i (1-based) came from original
    column perm[i-1]. Codewords of the standardized matrix map to the
    original code by placing coordinate i at position perm[i-1]. Derived
    forms (residue_code, dual) compose their permutations, so to_original
    always lands in the coordinates of the matrix first standardized.
    """

    matrix: GeneratorMatrix
    perm: Tuple[int, ...]
    profile: TypeProfile

    @property
    def modulus(self) -> Modulus:
        return self.matrix.modulus

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def num_rows(self) -> int:
        return self.matrix.num_rows

    def row_blocks(self) -> Tuple[int, ...]:
        """Block index (1-based) of each row of the matrix."""
        out = []
        for j, kj in enumerate(self.profile.ks, start=1):
            out.extend([j] * kj)
        return tuple(out)

    def row_scales(self) -> Tuple[int, ...]:
        return tuple(1 << (b - 1) for b in self.row_blocks())

    def coefficient_radices(self) -> Tuple[int, ...]:
        """Coefficient range per row: block-j rows take 2^(m-j+1) values."""
        m = self.modulus.m
        return tuple(2 ** (m - b + 1) for b in self.row_blocks())

    def size(self) -> int:
        return code_size(self.profile, self.modulus)

    def _perm_index(self) -> np.ndarray:
        return np.array(self.perm, dtype=np.int64) - 1

    def to_original(self, x: ZVector) -> ZVector:
        """Map a codeword of the standardized matrix back to original columns."""
        out = [0] * self.n
        for i, p in enumerate(self.perm):
            out[p - 1] = x.coords[i]
        return ZVector(x.modulus, out)

    def from_original(self, x: ZVector) -> ZVector:
        out = [x.coords[p - 1] for p in self.perm]
        return ZVector(x.modulus, out)

    def original_matrix(self) -> GeneratorMatrix:
        """The standardized rows mapped back to pre-permutation columns."""
        arr = np.zeros_like(self.matrix.array)
        for i, p in enumerate(self.perm):
            arr[:, p - 1] = self.matrix.array[:, i]
        return GeneratorMatrix(self.modulus, arr)


def _val_is(e: int, scale: int) -> bool:
    # entry has 2-adic valuation exactly log2(scale)
    return e % (2 * scale) == scale


def standardize(g: GeneratorMatrix) -> StandardForm:
    """Row-reduce a generator matrix over Z_{2^m} to standard form.

    Pivoting prefers unit entries, scanning the leftmost column first and
    the topmost row within a column. Column swaps are recorded in perm.
    Redundant rows reduce away silently; the zero code gets an all-zero
    profile.
    """
    mod = g.modulus
    m = mod.m
    if m is None:
        raise DomainError(f"standardize requires a power-of-two modulus, got {mod}")
    two_k = mod.two_k
    M = g.array.copy()
    R, n = M.shape
    cols = list(range(n))
    slot = 0  # pivots placed so far; also the next pivot row index
    ks = []
    for j in range(1, m + 1):
        scale = 1 << (j - 1)
        block_start = slot
        while True:
            hit = None
            for q in range(slot, n):
                for i in range(slot, R):
                    if _val_is(int(M[i, q]), scale):
                        hit = (q, i)
                        break
                if hit:
                    break
            if hit is None:
                break
            q, i = hit
            if q != slot:
                M[:, [slot, q]] = M[:, [q, slot]]
                cols[slot], cols[q] = cols[q], cols[slot]
            if i != slot:
                M[[slot, i]] = M[[i, slot]]
            unit = int(M[slot, slot]) // scale
            if unit != 1:
                M[slot] = (M[slot] * pow(unit, -1, two_k)) % two_k
            for i2 in range(block_start, R):
                if i2 == slot:
                    continue
                e = int(M[i2, slot])
                assert e % scale == 0
                t = e // scale
                if t:
                    M[i2] = (M[i2] - t * M[slot]) % two_k
            slot += 1
        ks.append(slot - block_start)
    assert not M[slot:].any(), "nonzero rows left after all blocks"
    perm = tuple(c + 1 for c in cols)
    return StandardForm(GeneratorMatrix(mod, M[:slot]), perm, TypeProfile(ks))


def contains(sf: StandardForm, x: ZVector) -> bool:
    """Membership of an original-coordinate vector, by back-substitution."""
    return coefficient_vector(sf, x) is not None


def coefficient_vector(sf: StandardForm, x: ZVector):
    """Coefficients expressing x (original coordinates) over the rows, or None."""
    if x.modulus != sf.modulus or len(x) != sf.n:
        raise DimensionError("vector does not match the code's modulus or length")
    two_k = sf.modulus.two_k
    resid = x.array()[sf._perm_index()]
    M = sf.matrix.array
    coeffs = []
    for i, (scale, radix) in enumerate(zip(sf.row_scales(), sf.coefficient_radices())):
        e = int(resid[i])
        if e % scale:
            return None
        c = (e // scale) % radix
        coeffs.append(c)
        if c:
            resid = (resid - c * M[i]) % two_k
    return None if resid.any() else tuple(coeffs)


def _decode_index(idx: int, radices: Sequence[int]) -> list:
    digits = []
    for r in radices:
        digits.append(idx % r)
        idx //= r
    return digits


def enumerate_codewords(sf: StandardForm,
                        partition: Optional[Tuple[int, int]] = None,
                        budget: int = DEFAULT_BUDGET) -> Iterator[ZVector]:
    """Yield every codeword exactly once, in odometer coefficient order.

    The first row's coefficient is least significant. With a partition
    (i, t), yields the i-th of t disjoint contiguous index slices; the
    union over all slices is the whole code.
    """
    size = sf.size()
    if partition is None:
        start, end = 0, size
        if size > budget:
            raise CapacityError(
                f"code size {size} exceeds budget {budget}; pass a partition")
    else:
        idx, total = partition
        if not (0 <= idx < total):
            raise DomainError(f"partition index {idx} not in [0, {total})")
        start = size * idx // total
        end = size * (idx + 1) // total
    if start >= end:
        return
    mod = sf.modulus
    two_k = mod.two_k
    M = sf.matrix.array
    radices = sf.coefficient_radices()
    digits = _decode_index(start, radices)
    word = np.zeros(sf.n, dtype=np.int64)
    for i, d in enumerate(digits):
        if d:
            word = (word + d * M[i]) % two_k
    orig = np.empty(sf.n, dtype=np.int64)
    pidx = sf._perm_index()
    orig[pidx] = word
    yield ZVector(mod, orig)
    for _ in range(start + 1, end):
        # odometer step: wrapped digits each add one row (radix*row = 0)
        i = 0
        while True:
            word = (word + M[i]) % two_k
            if digits[i] + 1 < radices[i]:
                digits[i] += 1
                break
            digits[i] = 0
            i += 1
        orig = np.empty(sf.n, dtype=np.int64)
        orig[pidx] = word
        yield ZVector(mod, orig)


def _compose_onto(parent: StandardForm, local: StandardForm) -> StandardForm:
    # local was standardized in parent's standardized coordinates; rewrite
    # its perm so to_original refers to parent's original coordinates
    perm = tuple(parent.perm[q - 1] for q in local.perm)
    return StandardForm(local.matrix, perm, local.profile)


def residue_code(sf: StandardForm, j: int) -> StandardForm:
    """Standard form of the code reduced modulo 2^j, for 1 <= j < m."""
    m = sf.modulus.m
    if m is None:
        raise DomainError("residue codes need a power-of-two modulus")
    if not 1 <= j < m:
        raise DomainError(f"residue exponent {j} not in [1, {m})")
    new_mod = Modulus(2**j)
    reduced = GeneratorMatrix(new_mod, sf.matrix.array % new_mod.two_k)
    return _compose_onto(sf, standardize(reduced))


def dual(sf: StandardForm) -> StandardForm:
    """Standard form of the dual code, in the same coordinates as sf.

    Solves the homogeneous system by back-substitution through the block
    structure: tail coordinates are free, pivot coordinates are determined
    modulo a torsion parameter per block-j row (j >= 2).
    """
    mod = sf.modulus
    m = mod.m
    if m is None:
        raise DomainError("dual requires a power-of-two modulus")
    two_k = mod.two_k
    M = sf.matrix.array
    K = sf.num_rows
    n = sf.n
    blocks = sf.row_blocks()

    def solve(tail: np.ndarray, torsion_row: int = -1) -> np.ndarray:
        x = np.zeros(n, dtype=np.int64)
        x[K:] = tail
        for p in reversed(range(K)):
            jb = blocks[p]
            scale = 1 << (jb - 1)
            rhs = int(-(M[p, p + 1:] * x[p + 1:]).sum()) % two_k
            assert rhs % scale == 0
            xp = (rhs // scale) % (two_k // scale)
            if p == torsion_row:
                xp = (xp + two_k // scale) % two_k
            x[p] = xp
        return x

    gens = []
    for t in range(K, n):
        tail = np.zeros(n - K, dtype=np.int64)
        tail[t - K] = 1
        gens.append(solve(tail))
    for p in range(K):
        if blocks[p] >= 2:
            gens.append(solve(np.zeros(n - K, dtype=np.int64), torsion_row=p))
    if gens:
        gm = GeneratorMatrix(mod, np.array(gens, dtype=np.int64))
    else:
        gm = GeneratorMatrix(mod, np.zeros((0, n), dtype=np.int64))
    return _compose_onto(sf, standardize(gm))


def codes_equal(a: StandardForm, b: StandardForm,
                samples: int = 0, seed: int = 0) -> bool:
    """Exact equality of two codes over the same original coordinates.

    Checks size equality plus mutual membership of all generator rows,
    which is a proof of equality. Optionally also cross-checks `samples`
    random codewords from each side.
    """
    if a.modulus != b.modulus or a.n != b.n:
        return False
    if a.size() != b.size():
        return False
    for row in a.original_matrix().rows():
        if not contains(b, row):
            return False
    for row in b.original_matrix().rows():
        if not contains(a, row):
            return False
    if samples:
        rng = np.random.Generator(np.random.Philox(seed))
        for sf1, sf2 in ((a, b), (b, a)):
            radices = np.array(sf1.coefficient_radices(), dtype=np.int64)
            if len(radices) == 0:
                continue
            coeffs = rng.integers(0, radices, size=(samples, len(radices)))
            words = coeffs @ sf1.matrix.array % sf1.modulus.two_k
            pidx = sf1._perm_index()
            for w in words:
                orig = np.empty(sf1.n, dtype=np.int64)
                orig[pidx] = w
                if not contains(sf2, ZVector(sf1.modulus, orig)):
                    return False
    return True
