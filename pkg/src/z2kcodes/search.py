"""Candidate search for tail supports that keep a doubled Z8 code extremal.

A free self-dual source [I | A] over Z8 of even length n = 2h can be doubled
with a vector 4u supported on at least two tail coordinates.  Most supports
ruin extremality of the double; this module computes the surviving supports.
The fast path walks every mod-4 residue codeword of weight 16 once, expands
the weight-preserving coefficient lifts, and marks the excluded supports into
a bitset together with a witness per support (step 1), then adds the odd-tail
supports of the generator rows (step 2).  A direct oracle recomputes the same
ledger from the defining conditions for cross-checking, and a reconstruction
layer inverts the doubling: it enumerates every free source whose double
equals a given code and picks out members by candidate count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from . import backend, packing
from .certify import certify_type_II
from .doubling import DoubleResult, DoublingVector, double_code
from .model import (CapacityError, GeneratorMatrix, StandardForm, codes_equal,
                    contains, dual, residue_code, standardize)
from .rings import (DimensionError, DomainError, Modulus, Z8, ZVector,
                    euclidean_weight)
from .weights import WeightDistribution, low_weight_codewords, weight_distribution

# Packed scans keep one mod-4 word in a single 64-bit lane and tail masks in
# 16 bits, so the head may not exceed 16 rows (length 32).
MAX_SCAN_HEAD = 16
SCAN_LENGTHS = (24, 32, 40)
ORACLE_BUDGET = 1 << 26

_W4 = np.array([0, 1, 4, 1], dtype=np.int64)
_W8 = np.array([0, 1, 4, 9, 16, 9, 4, 1], dtype=np.int64)


class ResidueNotExtremalError(DomainError):
    """The mod-4 residue has a nonzero Euclidean weight below 16."""

    def __init__(self, weight: int):
        super().__init__(
            "residue code has a nonzero Euclidean weight %d below 16" % weight)
        self.weight = int(weight)


class ExcludedCandidateError(DomainError):
    """A requested support is excluded; carries the ledger witness."""

    def __init__(self, candidate: "CandidateSet", witness: "ExclusionWitness"):
        super().__init__("support %s is excluded (step %d witness)"
                         % (sorted(candidate.positions), witness.step))
        self.candidate = candidate
        self.witness = witness


@dataclass(frozen=True)
class CandidateSet:
    """A set of at least two tail positions, 1-based original coordinates."""

    positions: FrozenSet[int]

    def __init__(self, positions: Iterable[int]):
        pos = frozenset(int(p) for p in positions)
        if len(pos) < 2:
            raise DomainError("a candidate support needs at least two positions")
        if any(p < 1 for p in pos):
            raise DomainError("positions are 1-based")
        object.__setattr__(self, "positions", pos)

    def sorted(self) -> Tuple[int, ...]:
        return tuple(sorted(self.positions))

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.sorted())


@dataclass(frozen=True)
class ExclusionWitness:
    """Why a support is excluded: a concrete codeword, plus its derivation.

    Step-1 witnesses carry the mod-4 residue word and the rows whose
    coefficients were raised by 4 to reach the excluding codeword; step-2
    witnesses carry the generator row index whose scale-4 multiple excludes.
    """

    step: int
    codeword: ZVector
    row: Optional[int] = None
    residue_word: Optional[ZVector] = None
    toggled_rows: FrozenSet[int] = frozenset()
    scan_index: Optional[int] = None


def _unpack_bitset(bits: np.ndarray, total: int) -> np.ndarray:
    flat = np.unpackbits(bits.view(np.uint8), bitorder="little")
    return flat[:total].astype(bool)


def _pack_mod4(word: Sequence[int]) -> int:
    packed = 0
    for j, d in enumerate(word):
        packed |= int(d) << (2 * j)
    return packed


class ExclusionLedger:
    """Excluded tail supports of one scan, each traceable to a witness.

    Supports are stored as bit masks over the tail columns of the standard
    form: bit j stands for original position perm[h + j].  Only masks with
    at least two bits count as excluded; smaller marks are bookkeeping.
    """

    def __init__(self, source: StandardForm, bits: np.ndarray,
                 wit_word: np.ndarray, wit_asub: np.ndarray,
                 wit_step: np.ndarray, step2_masks: Sequence[int],
                 step2_rows: Sequence[int], n_weight16: int):
        self._sf = source
        self._h = source.num_rows
        self._bits = bits
        self._wit_word = wit_word
        self._wit_asub = wit_asub
        self._wit_step = wit_step
        self._step2 = {int(m): int(r) for m, r in
                       zip(reversed(list(step2_masks)), reversed(list(step2_rows)))}
        self.n_weight16 = int(n_weight16)
        h = self._h
        popc = packing.popcount16_table()
        marked = _unpack_bitset(bits, 1 << h)
        universe = popc[np.arange(1 << h)] >= 2
        self._step1 = marked & universe
        excluded = self._step1.copy()
        for m in self._step2:
            excluded[m] = True
        self._excluded = excluded
        # original position of tail bit j, and the reverse lookup
        self._tail_positions = tuple(source.perm[h + j] for j in range(h))
        self._bit_of = {p: j for j, p in enumerate(self._tail_positions)}

    @property
    def source(self) -> StandardForm:
        return self._sf

    @property
    def head_size(self) -> int:
        return self._h

    def universe_size(self) -> int:
        return (1 << self._h) - 1 - self._h

    def mask_of(self, s: CandidateSet) -> int:
        mask = 0
        for p in s.positions:
            j = self._bit_of.get(p)
            if j is None:
                raise DomainError("position %d is not a tail coordinate" % p)
            mask |= 1 << j
        return mask

    def positions_of(self, mask: int) -> CandidateSet:
        return CandidateSet(self._tail_positions[j]
                            for j in range(self._h) if (mask >> j) & 1)

    def excluded_masks(self) -> np.ndarray:
        return np.nonzero(self._excluded)[0].astype(np.int64)

    def candidate_masks(self) -> np.ndarray:
        popc = packing.popcount16_table()
        keep = (popc[np.arange(1 << self._h)] >= 2) & ~self._excluded
        return np.nonzero(keep)[0].astype(np.int64)

    def excluded_count(self) -> int:
        return int(self._excluded.sum())

    def candidate_count(self) -> int:
        return self.universe_size() - self.excluded_count()

    def excluded(self) -> FrozenSet[CandidateSet]:
        return frozenset(self.positions_of(int(m)) for m in self.excluded_masks())

    def is_excluded(self, s: CandidateSet) -> bool:
        return bool(self._excluded[self.mask_of(s)])

    def provenance_counts(self) -> Tuple[int, int]:
        """(step-1 labeled, step-2 labeled) excluded supports; step 1 wins ties."""
        step1 = int(self._step1.sum())
        return step1, self.excluded_count() - step1

    def witness(self, s: CandidateSet) -> ExclusionWitness:
        mask = self.mask_of(s)
        if not self._excluded[mask]:
            raise DomainError("support %s is not excluded" % sorted(s.positions))
        if self._step1[mask]:
            return self._decode_step1(mask)
        row = self._step2[mask]
        orig = self._sf.original_matrix().array[row - 1]
        word = ZVector(self._sf.modulus, ((4 * orig) % 8).tolist())
        return ExclusionWitness(step=2, codeword=word, row=row)

    def _decode_step1(self, mask: int) -> ExclusionWitness:
        h, n = self._h, self._sf.n
        lanes = np.array([self._wit_word[mask]], dtype=np.uint64)
        word = packing.unpack_word(lanes, 4, n)
        residue = ZVector(Modulus(4), word.tolist())
        asub = int(self._wit_asub[mask])
        toggled = frozenset(i + 1 for i in range(h) if (asub >> i) & 1)
        coeff = np.where(word[:h] == 3, 7, word[:h]).astype(np.int64)
        for i in toggled:
            coeff[i - 1] += 4
        v8 = coeff @ self._sf.matrix.array % 8
        std = ZVector(self._sf.modulus, v8.tolist())
        return ExclusionWitness(
            step=1,
            codeword=self._sf.to_original(std),
            residue_word=ZVector(Modulus(4), _reorder(word, self._sf)),
            toggled_rows=toggled,
            scan_index=int(self._wit_step[mask]))


def _reorder(word: np.ndarray, sf: StandardForm) -> List[int]:
    out = [0] * sf.n
    for i, p in enumerate(sf.perm):
        out[p - 1] = int(word[i])
    return out


def _validate_scan_source(sf: StandardForm) -> int:
    if sf.modulus.two_k != 8:
        raise DomainError("the candidate scan is defined over Z8")
    h = sf.n // 2
    if sf.profile.ks != (h, 0, 0) or sf.n != 2 * h:
        raise DomainError("source must be free with rank half its length")
    if sf.n not in SCAN_LENGTHS:
        raise DomainError("scan supports lengths %s" % (SCAN_LENGTHS,))
    if h > MAX_SCAN_HEAD:
        raise CapacityError(
            "packed scan holds one word per 64-bit lane; head size %d exceeds %d"
            % (h, MAX_SCAN_HEAD))
    cert = certify_type_II(sf)
    if not cert.is_type_ii:
        raise DomainError("source must be self-dual with doubly even weights")
    return h


def _step2_data(G8: np.ndarray, h: int) -> Tuple[List[int], List[int]]:
    """Masks of odd tail entries per row, keeping rows with two or more."""
    masks: List[int] = []
    rows: List[int] = []
    A2 = G8[:, h:] % 2
    for i in range(h):
        bits = np.nonzero(A2[i])[0]
        if len(bits) < 2:
            continue
        masks.append(int(np.bitwise_or.reduce(1 << bits.astype(np.int64))))
        rows.append(i + 1)
    return masks, rows


def _slice_bounds(total: int, parts: int) -> List[Tuple[int, int]]:
    parts = max(1, int(parts))
    bounds = [(total * i // parts, total * (i + 1) // parts)
              for i in range(parts)]
    return [(lo, hi) for lo, hi in bounds if lo < hi]


def _merge_scan(parts: List[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]
                ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Union the bitsets; on shared masks the earliest scan index wins."""
    bits, ww, wa, ws = parts[0]
    total = ww.shape[0]
    have = _unpack_bitset(bits, total)
    for nbits, nww, nwa, nws in parts[1:]:
        other = _unpack_bitset(nbits, total)
        take = other & (~have | (nws < ws))
        ww[take] = nww[take]
        wa[take] = nwa[take]
        ws[take] = nws[take]
        bits |= nbits
        have |= other
    return bits, ww, wa, ws


def algorithmC_exclusions(sf: StandardForm, *,
                          check_residue_extremal: bool = True,
                          slices: int = 1,
                          threads: int = 1) -> ExclusionLedger:
    """Scan all weight-16 residue words and mark every excluded tail support.

    Step 1 walks the 4^h mod-4 residue words of the source in Gray order;
    each weight-16 word is lifted back to Z8 with every coefficient choice
    that preserves the weight coordinatewise, and the lift's tail pattern
    marks the supports it excludes.  Step 2 adds the odd-entry tail masks of
    the generator rows.  Slices split the residue walk; each slice can run
    on its own thread and the partial ledgers merge by set union.
    """
    h = _validate_scan_source(sf)
    G8 = sf.matrix.array.astype(np.int64)
    size = 4 ** h
    bounds = _slice_bounds(size, slices)

    def run(lo: int, hi: int):
        bits = np.zeros(((1 << h) + 63) // 64, dtype=np.uint64)
        ww = np.zeros(1 << h, dtype=np.uint64)
        wa = np.zeros(1 << h, dtype=np.uint16)
        ws = np.zeros(1 << h, dtype=np.int64)
        bad, n16 = backend.exclusion_scan_range(
            G8, h, lo, hi, check_residue_extremal, bits, ww, wa, ws)
        return bits, ww, wa, ws, bad, n16

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            results = list(pool.map(lambda b: run(*b), bounds))
    else:
        results = [run(lo, hi) for lo, hi in bounds]

    bad_weights = [r[4] for r in results if r[4]]
    if bad_weights:
        raise ResidueNotExtremalError(min(bad_weights))
    n_weight16 = sum(r[5] for r in results)
    bits, ww, wa, ws = _merge_scan([r[:4] for r in results])
    step2_masks, step2_rows = _step2_data(G8, h)
    return ExclusionLedger(sf, bits, ww, wa, ws, step2_masks, step2_rows,
                           n_weight16)


def candidate_sets(sf: StandardForm, *,
                   check_residue_extremal: bool = True,
                   slices: int = 1, threads: int = 1) -> FrozenSet[CandidateSet]:
    """All tail supports of size >= 2 that survive the exclusion scan."""
    ledger = algorithmC_exclusions(sf, check_residue_extremal=check_residue_extremal,
                                   slices=slices, threads=threads)
    return frozenset(ledger.positions_of(int(m)) for m in ledger.candidate_masks())


def candidate_count(sf: StandardForm, *, slices: int = 1, threads: int = 1) -> int:
    """Number of surviving tail supports."""
    return algorithmC_exclusions(sf, slices=slices,
                                 threads=threads).candidate_count()


def brute_force_exclusions(sf: StandardForm, *,
                           check_residue_extremal: bool = True,
                           budget: int = ORACLE_BUDGET,
                           partition: Optional[Tuple[int, int]] = None
                           ) -> ExclusionLedger:
    """Oracle twin of the scan: enumerate codewords and test the conditions.

    Residue words come from a plain base-4 odometer over the coefficient
    space, with no Gray stepping and no packing.  A support S is excluded
    when some codeword v has all tail digits 3, 4, 5 inside S, S inside the
    digits 2..6, and residue weight 16; or when v is 4 times a binary
    combination of rows whose coordinate-4 support differs from S in exactly
    one position.  Runs above the budget need an explicit partition; only
    the partitioned residue range is covered in that case.
    """
    h = _validate_scan_source(sf)
    size = 4 ** h
    if partition is None:
        lo, hi = 0, size
        if size > budget:
            raise CapacityError(
                "odometer over %d residue words exceeds the budget; pass "
                "partition=(i, t) to run a slice" % size)
    else:
        i, t = partition
        if t < 1 or not 0 <= i < t:
            raise DomainError("partition must satisfy 0 <= i < t")
        lo, hi = size * i // t, size * (i + 1) // t
        if hi - lo > budget:
            raise CapacityError("partition slice exceeds the budget")
    G8 = sf.matrix.array.astype(np.int64)
    A8 = G8[:, h:]
    R4 = G8 % 4
    bits = np.zeros(((1 << h) + 63) // 64, dtype=np.uint64)
    ww = np.zeros(1 << h, dtype=np.uint64)
    wa = np.zeros(1 << h, dtype=np.uint16)
    ws = np.zeros(1 << h, dtype=np.int64)
    marked = np.zeros(1 << h, dtype=bool)
    n16 = 0
    shifts = 2 * np.arange(h, dtype=np.int64)
    block = 1 << 16
    for blo in range(lo, hi, block):
        bhi = min(blo + block, hi)
        idx = np.arange(blo, bhi, dtype=np.int64)
        D = (idx[:, None] >> shifts[None, :]) & 3
        words = D @ R4 % 4
        wts = _W4[words].sum(axis=1)
        if check_residue_extremal:
            badm = (wts > 0) & (wts < 16)
            if badm.any():
                raise ResidueNotExtremalError(int(wts[badm].min()))
        for r in np.nonzero(wts == 16)[0]:
            n16 += 1
            _oracle_condition1(words[r], h, A8, int(blo + r),
                               bits, ww, wa, ws, marked)
    step2_masks, step2_rows = _oracle_condition2(G8, h)
    return ExclusionLedger(sf, bits, ww, wa, ws, step2_masks, step2_rows, n16)


def _oracle_condition1(word: np.ndarray, h: int, A8: np.ndarray, order: int,
                       bits: np.ndarray, ww: np.ndarray, wa: np.ndarray,
                       ws: np.ndarray, marked: np.ndarray) -> None:
    """Mark every support sandwiched by one lift of a weight-16 residue word.

    Tail-only supports force the head clear of digits 3, 4, 5, so head
    digits 0 and 1 admit no shift, digit 3 needs one, and digit 2 leaves it
    free; each surviving lift excludes its {3,4,5} tail mask joined with any
    subset of its {2,6} tail mask.
    """
    digits = word[:h]
    base = np.where(digits == 3, 7, digits) @ A8 % 8
    free = np.nonzero(digits == 2)[0]
    packed = _pack_mod4(word)
    for a in range(1 << len(free)):
        tail = base
        asub = 0
        for t in range(len(free)):
            if (a >> t) & 1:
                asub |= 1 << int(free[t])
                tail = (tail + 4 * A8[free[t]]) % 8
        low = 0
        om = 0
        for j in range(h):
            d = tail[j]
            if d in (3, 4, 5):
                low |= 1 << j
            elif d in (2, 6):
                om |= 1 << j
        ss = om
        while True:
            mm = low | ss
            if not marked[mm]:
                marked[mm] = True
                bits[mm >> 6] |= np.uint64(1) << np.uint64(mm & 63)
                ww[mm] = packed
                wa[mm] = asub
                ws[mm] = order
            if ss == 0:
                break
            ss = (ss - 1) & om


def _oracle_condition2(G8: np.ndarray, h: int) -> Tuple[List[int], List[int]]:
    """Supports at distance one from some scale-4 word, over all 2^h words.

    The coordinate-4 support of 4 times a binary row combination keeps the
    combination's bits on the head, so two or more combined rows put the
    distance above one for every tail support; one row leaves exactly its
    odd tail mask, and the empty combination reaches only singletons, which
    fall below the two-position floor.
    """
    G2 = G8 % 2
    ys = np.arange(1 << h, dtype=np.int64)
    Y = ((ys[:, None] >> np.arange(h)[None, :]) & 1).astype(np.int64)
    supp = Y @ G2 % 2
    head_counts = supp[:, :h].sum(axis=1)
    masks: List[int] = []
    rows: List[int] = []
    seen: Set[int] = set()
    powers = 1 << np.arange(h, dtype=np.int64)
    for y in np.nonzero(head_counts == 1)[0]:
        row = int(np.nonzero(Y[y])[0][0]) + 1
        mask = int((supp[y, h:] * powers).sum())
        if bin(mask).count("1") < 2 or mask in seen:
            continue
        seen.add(mask)
        masks.append(mask)
        rows.append(row)
    order = np.argsort(rows, kind="stable")
    return [masks[i] for i in order], [rows[i] for i in order]


def build_extremal_double(sf: StandardForm, s: CandidateSet, *,
                          ledger: Optional[ExclusionLedger] = None
                          ) -> "ExtremalDouble":
    """Double the source with the support's scale-4 vector, if not excluded.

    Computes the exclusion ledger when none is supplied, rejects excluded
    supports with their witness, and otherwise returns the certified double
    together with the Hamming distribution of its binary residue.
    """
    if not isinstance(s, CandidateSet):
        s = CandidateSet(s)
    if ledger is None:
        ledger = algorithmC_exclusions(sf)
    elif ledger.source is not sf and not codes_equal(ledger.source, sf, samples=0):
        raise DomainError("ledger belongs to a different source")
    if ledger.is_excluded(s):
        raise ExcludedCandidateError(s, ledger.witness(s))
    coords = [0] * sf.n
    for p in s.positions:
        coords[p - 1] = 4
    result = double_code(sf, ZVector(sf.modulus, coords))
    distribution = weight_distribution(residue_code(result.doubled, 1),
                                       kind="hamming")
    return ExtremalDouble(double=result, candidate=s,
                          binary_distribution=distribution)


@dataclass(frozen=True)
class ExtremalDouble:
    """A certified double with its support and binary residue distribution."""

    double: DoubleResult
    candidate: CandidateSet
    binary_distribution: WeightDistribution


def doubled_weight16_codeword(sf: StandardForm, s: CandidateSet,
                              residue_words: Optional[Iterable[ZVector]] = None
                              ) -> Optional[ZVector]:
    """Search the double of (sf, s) for a codeword of Euclidean weight 16.

    Covers the two families the exclusion conditions draw witnesses from:
    weight-preserving lifts of weight-16 residue words shifted by the
    support vector, and scale-4 words shifted likewise.  Weights are
    evaluated directly from the coordinate table.  Returns a weight-16
    codeword of the double in original coordinates, or None.
    """
    if not isinstance(s, CandidateSet):
        s = CandidateSet(s)
    h = sf.n // 2
    G8 = sf.matrix.array.astype(np.int64)
    A8 = G8[:, h:]
    bit_of = {p: j for j, p in enumerate(sf.perm[h:])}
    u_tail = np.zeros(h, dtype=np.int64)
    for p in s.positions:
        j = bit_of.get(p)
        if j is None:
            raise DomainError("position %d is not a tail coordinate" % p)
        u_tail[j] = 4
    # scale-4 words: 4 times one generator row lands on weight 16 exactly
    # when its odd tail mask equals the support
    A2 = A8 % 2
    target = (u_tail // 4).astype(np.int64)
    for i in range(h):
        if np.array_equal(A2[i], target):
            v = (4 * G8[i]) % 8
            v[h:] = (v[h:] + u_tail) % 8
            return sf.to_original(ZVector(sf.modulus, v.tolist()))
    if residue_words is None:
        residue_words = low_weight_codewords(residue_code(sf, 2), 16)
    for word in residue_words:
        std = sf.from_original(word)
        digits = np.array(std.coords[:h], dtype=np.int64)
        base = np.where(digits == 3, 7, digits)
        head_w = int(_W8[base].sum())
        base_tail = base @ A8 % 8
        free = np.nonzero(digits == 2)[0]
        for a in range(1 << len(free)):
            tail = base_tail
            for t in range(len(free)):
                if (a >> t) & 1:
                    tail = (tail + 4 * A8[free[t]]) % 8
            shifted = (tail + u_tail) % 8
            if head_w + int(_W8[shifted].sum()) == 16:
                full = np.concatenate([base.copy(), shifted])
                for t in range(len(free)):
                    if (a >> t) & 1:
                        full[free[t]] = (full[free[t]] + 4) % 8
                return sf.to_original(ZVector(sf.modulus, full.tolist()))
    return None


def _gf2_solve_all(M: np.ndarray, b: np.ndarray
                   ) -> Optional[Tuple[np.ndarray, List[np.ndarray]]]:
    """Particular solution and nullspace basis of Mx = b over GF(2)."""
    nr, nc = M.shape
    aug = np.hstack([M % 2, (b % 2)[:, None]])
    rank = 0
    pivots: List[int] = []
    for c in range(nc):
        hit = None
        for i in range(rank, nr):
            if aug[i, c]:
                hit = i
                break
        if hit is None:
            continue
        aug[[rank, hit]] = aug[[hit, rank]]
        for i in range(nr):
            if i != rank and aug[i, c]:
                aug[i] ^= aug[rank]
        pivots.append(c)
        rank += 1
    if aug[rank:, -1].any():
        return None
    x0 = np.zeros(nc, dtype=np.int64)
    for ri, c in enumerate(pivots):
        x0[c] = aug[ri, -1]
    basis = []
    pivot_set = set(pivots)
    for fc in range(nc):
        if fc in pivot_set:
            continue
        v = np.zeros(nc, dtype=np.int64)
        v[fc] = 1
        for ri, c in enumerate(pivots):
            v[c] = aug[ri, fc]
        basis.append(v)
    return x0, basis


@dataclass(frozen=True, eq=False)
class SourceFamily:
    """All free sources whose double with a fixed vector equals one code.

    Members share the mod-4 tail residue_tail; member index bits select
    which binary shift matrices are added to the particular shift, and the
    member matrix is [I | residue_tail + 4 * shift].
    """

    residue_tail: np.ndarray
    particular: np.ndarray
    shifts: Tuple[np.ndarray, ...]

    @property
    def head_size(self) -> int:
        return self.residue_tail.shape[0]

    @property
    def member_count(self) -> int:
        return 1 << len(self.shifts)

    def member_matrix(self, index: int) -> np.ndarray:
        if not 0 <= index < self.member_count:
            raise DomainError("member index out of range")
        T = self.particular.copy()
        for b, basis in enumerate(self.shifts):
            if (index >> b) & 1:
                T ^= basis
        h = self.head_size
        return np.hstack([np.eye(h, dtype=np.int64),
                          (self.residue_tail + 4 * T) % 8])

    def member(self, index: int) -> StandardForm:
        return standardize(GeneratorMatrix(Z8, self.member_matrix(index)))


def undouble_family(sf: StandardForm, dv: Union[DoublingVector, ZVector]
                       ) -> Tuple[SourceFamily, ...]:
    """Enumerate every free source whose double with dv equals the code.

    The mod-4 residue of any such source is one of the three self-dual
    codes between the given code's residue and its dual, pinned up to a
    scale-4 tail shift; the admissible shifts solve a linear system over
    GF(2) built from row orthogonality, row weights, and membership of the
    given generators in the double.
    """
    if sf.modulus.two_k != 8:
        raise DomainError("source reconstruction is defined over Z8")
    n = sf.n
    h = n // 2
    if sf.profile.ks != (h - 1, 1, 1):
        raise DomainError("doubled code must have rank profile (n/2-1, 1, 1)")
    vec = dv.vec if isinstance(dv, DoublingVector) else dv
    if vec.modulus.two_k != 8 or len(vec.coords) != n:
        raise DimensionError("doubling vector does not match the code")
    if any(c not in (0, 4) for c in vec.coords):
        raise DomainError("doubling vector coordinates must lie in {0, 4}")
    if any(vec.coords[i] for i in range(h)):
        raise DomainError("doubling vector must be supported on tail columns")
    if not contains(sf, vec):
        raise DomainError("doubling vector must be a codeword of the double")
    G = sf.original_matrix().array.astype(np.int64)
    nr = G.shape[0]
    S = np.array([c // 4 for c in vec.coords[h:]], dtype=np.int64)

    results = []
    for Abar in _pinned_residue_tails(G, n, h):
        G0 = np.hstack([np.eye(h, dtype=np.int64), Abar])
        w0 = _W8[G0].sum(axis=1)
        if np.any(w0 % 8):
            continue  # a scale-4 tail shift moves weights by multiples of 8
        P = (G0 @ G0.T) % 8
        if np.any(P % 4) or np.any(np.diag(P) // 4 % 2):
            continue  # shifts change pairwise products by 4, self products by 8
        E = (P // 4) % 2
        A2 = Abar % 2
        nT = h * h
        eqs: List[np.ndarray] = []
        rhs: List[int] = []
        for i in range(h):
            for j in range(i + 1, h):
                row = np.zeros(nT + nr, dtype=np.int64)
                row[i * h:(i + 1) * h] ^= A2[j]
                row[j * h:(j + 1) * h] ^= A2[i]
                eqs.append(row)
                rhs.append(int(E[i, j]))
        for i in range(h):
            row = np.zeros(nT + nr, dtype=np.int64)
            row[i * h:(i + 1) * h] = A2[i]
            eqs.append(row)
            rhs.append(int(w0[i] // 8) % 2)
        ok = True
        for r in range(nr):
            head = G[r, :h]
            diff = (G[r, h:] - head @ Abar) % 8
            if np.any(diff % 4):
                ok = False  # generator residue falls outside the pinned residue
                break
            y = (diff // 4) % 2
            h2 = head % 2
            for t in range(h):
                row = np.zeros(nT + nr, dtype=np.int64)
                row[t:nT:h] = h2
                if S[t]:
                    row[nT + r] = 1
                eqs.append(row)
                rhs.append(int(y[t]))
        if not ok:
            continue
        sol = _gf2_solve_all(np.array(eqs, dtype=np.int64),
                             np.array(rhs, dtype=np.int64))
        if sol is None:
            continue
        part, basis = sol
        results.append(SourceFamily(
            residue_tail=Abar,
            particular=part[:nT].reshape(h, h),
            shifts=tuple(v[:nT].reshape(h, h) for v in basis)))
    return tuple(results)


def _pinned_residue_tails(G: np.ndarray, n: int, h: int) -> List[np.ndarray]:
    """Tail blocks of the free self-dual mod-4 codes containing the residue."""
    z4 = Modulus(4)
    sfR = standardize(GeneratorMatrix(z4, G % 4))
    if sfR.profile.ks != (h - 1, 1):
        raise DomainError("residue of the double must have rank profile (n/2-1, 1)")
    sfD = dual(sfR)
    dual_rows = [ZVector(z4, r.tolist())
                 for r in sfD.original_matrix().array]
    a = next((d for d in dual_rows if not contains(sfR, d)), None)
    if a is None:
        raise DomainError("residue dual adds no new cosets")
    a_arr = np.array(a.coords, dtype=np.int64)
    b = None
    for d in dual_rows:
        d_arr = np.array(d.coords, dtype=np.int64)
        shifted = ZVector(z4, ((d_arr - a_arr) % 4).tolist())
        if not contains(sfR, d) and not contains(sfR, shifted):
            b = d_arr
            break
    if b is None:
        raise DomainError("residue dual has too few cosets")
    base = sfR.original_matrix().array
    tails = []
    for rep in (a_arr, b, (a_arr + b) % 4):
        sfX = standardize(GeneratorMatrix(z4, np.vstack([base, rep[None, :]])))
        if sfX.profile.ks != (h, 0):
            continue
        X = sfX.original_matrix().array
        if np.any((X @ X.T) % 4):
            continue
        if sfX.perm != tuple(range(1, n + 1)):
            continue  # head pivots must sit on the first half in place
        tails.append(sfX.matrix.array[:, h:] % 4)
    return tails


def family_candidate_counts(family: SourceFamily, *, threads: int = 1
                            ) -> Tuple[np.ndarray, np.ndarray]:
    """Candidate count and extremality flag for every family member.

    One collect pass over the particular member records, per weight-16
    residue word and lift, the odd head coefficients and the tail masks;
    moving to another member shifts tails by 4 on a pattern determined by
    the odd coefficients alone, so the records replay against each member
    as mask XORs without rescanning.
    """
    h = family.head_size
    if h > MAX_SCAN_HEAD:
        raise CapacityError(
            "packed scan holds one word per 64-bit lane; head size %d exceeds %d"
            % (h, MAX_SCAN_HEAD))
    base = family.member_matrix(0)
    size = 4 ** h
    bounds = _slice_bounds(size, threads)

    def collect(lo: int, hi: int):
        return backend.family_collect_range(base, h, lo, hi)

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            parts = list(pool.map(lambda bb: collect(*bb), bounds))
    else:
        parts = [collect(lo, hi) for lo, hi in bounds]
    bad = [p[4] for p in parts if p[4]]
    if bad:
        raise ResidueNotExtremalError(min(bad))
    x2 = np.concatenate([p[0] for p in parts])
    o = np.concatenate([p[1] for p in parts])
    pq = np.concatenate([p[2] for p in parts])

    packed = (x2.astype(np.uint64) << np.uint64(32)
              | o.astype(np.uint64) << np.uint64(16) | pq.astype(np.uint64))
    packed = np.unique(packed)
    x2 = (packed >> np.uint64(32)).astype(np.uint16)
    o = (packed >> np.uint64(16)).astype(np.uint16)
    pq = packed.astype(np.uint16)

    uniq, grp_of = np.unique(x2, return_inverse=True)
    nbits = len(family.shifts)
    powers = (1 << np.arange(h, dtype=np.int64))
    grp_toggles = np.zeros((len(uniq), max(nbits, 1)), dtype=np.uint64)
    for g, val in enumerate(uniq):
        x2bits = (int(val) >> np.arange(h)) & 1
        for b in range(nbits):
            pat = x2bits @ family.shifts[b] % 2
            grp_toggles[g, b] = np.uint64((pat * powers).sum())
    step2_masks, _ = _step2_data(base, h)
    step2 = np.array(step2_masks, dtype=np.int64)

    members = family.member_count
    mbounds = _slice_bounds(members, threads)

    def sweep(lo: int, hi: int):
        return backend.family_sweep_range(grp_of.astype(np.int64), o, pq,
                                          grp_toggles[:, :max(nbits, 1)],
                                          step2, h, lo, hi)

    if threads > 1 and len(mbounds) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            swept = list(pool.map(lambda bb: sweep(*bb), mbounds))
    else:
        swept = [sweep(lo, hi) for lo, hi in mbounds]
    counts = np.concatenate([sv[0] for sv in swept])
    extremal = np.concatenate([sv[1] for sv in swept])
    # a generator row with no odd tail entry is itself a scale-4 weight-16 word
    if np.any(~(base[:, h:] % 2).any(axis=1)):
        extremal[:] = False
    return counts, extremal


def recover_source(sf: StandardForm, dv: Union[DoublingVector, ZVector],
                   expected_count: int, *, threads: int = 1) -> StandardForm:
    """Pick the family member that is extremal and has the expected count.

    Enumerates the reconstruction family of (sf, dv), sweeps all members
    for candidate counts, and returns the lexicographically smallest member
    matrix among those that are extremal and hit the expected count.
    """
    families = undouble_family(sf, dv)
    if not families:
        raise DomainError("no free source family doubles to this code")
    best: Optional[np.ndarray] = None
    for family in families:
        try:
            counts, extremal = family_candidate_counts(family, threads=threads)
        except ResidueNotExtremalError:
            # the whole family shares this residue, so no member qualifies
            continue
        for idx in np.nonzero((counts == expected_count) & extremal)[0]:
            M = family.member_matrix(int(idx))
            if best is None or tuple(M.flatten()) < tuple(best.flatten()):
                best = M
    if best is None:
        raise DomainError(
            "no extremal family member reproduces count %d" % expected_count)
    source = standardize(GeneratorMatrix(Z8, best))
    vec = dv.vec if isinstance(dv, DoublingVector) else dv
    check = double_code(source, vec)
    if not codes_equal(check.doubled, sf, samples=64, seed=0):
        raise RuntimeError("reconstructed source fails to double back")
    return source
