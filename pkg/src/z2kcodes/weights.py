"""Weight distributions, minimum weight, and exact-weight collection.

Exhaustive scans walk every coefficient tuple of a standard form. A
partition (i, t) restricts a call to the i-th of t contiguous slices of
the coefficient range; distributions and collected sets merge across
slices to the same result as a single full run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, NamedTuple, Optional, Set, Tuple

import numpy as np

from . import backend, packing
from .model import DEFAULT_BUDGET, CapacityError, StandardForm, enumerate_codewords
from .rings import DomainError, ZVector, euclidean_weight, hamming_weight

_KINDS = ("euclidean", "hamming")


@dataclass(frozen=True)
class WeightDistribution:
    kind: str
    counts: Dict[int, int]

    def total(self) -> int:
        return sum(self.counts.values())


def merge_distributions(parts: Iterable[WeightDistribution]) -> WeightDistribution:
    """Sum slice distributions; slices must agree on kind."""
    kind = None
    counts: Dict[int, int] = {}
    for p in parts:
        if kind is None:
            kind = p.kind
        elif p.kind != kind:
            raise DomainError(f"cannot merge {p.kind} into {kind}")
        for w, c in p.counts.items():
            counts[w] = counts.get(w, 0) + c
    if kind is None:
        raise DomainError("nothing to merge")
    return WeightDistribution(kind, counts)


class MinWeightResult(NamedTuple):
    value: int
    exact: bool


def _check_kind(kind: str) -> None:
    if kind not in _KINDS:
        raise DomainError(f"unknown weight kind {kind!r}")


def _slice_range(size: int, partition: Optional[Tuple[int, int]],
                 budget: int) -> Tuple[int, int]:
    if partition is None:
        if size > budget:
            raise CapacityError(
                f"{size} coefficient tuples exceed budget {budget}; partition the scan")
        return 0, size
    i, t = partition
    if t < 1 or not (0 <= i < t):
        raise DomainError(f"invalid partition {partition}")
    lo = size * i // t
    hi = size * (i + 1) // t
    if hi - lo > budget:
        raise CapacityError(
            f"slice of {hi - lo} coefficient tuples exceeds budget {budget}")
    return lo, hi


def _weight_fn(kind: str):
    return euclidean_weight if kind == "euclidean" else hamming_weight


def weight_distribution(sf: StandardForm, kind: str = "euclidean",
                        partition: Optional[Tuple[int, int]] = None,
                        budget: int = DEFAULT_BUDGET) -> WeightDistribution:
    """Exact weight histogram of a code, or of one partition slice of it.

    A full run (partition None) covers every codeword; a slice covers its
    share of coefficient tuples, and merging all t slices reproduces the
    full distribution exactly.
    """
    _check_kind(kind)
    size = sf.size()
    lo, hi = _slice_range(size, partition, budget)
    if lo >= hi:
        return WeightDistribution(kind, {})
    two_k = sf.modulus.two_k
    if packing.packable(two_k):
        k = sf.modulus.k
        maxw = sf.n * k * k if kind == "euclidean" else sf.n
        hist = backend.hist_scan(sf.matrix.array, two_k,
                                 sf.coefficient_radices(), lo, hi, kind, maxw)
        counts = {int(w): int(c) for w, c in enumerate(hist) if c}
    else:
        wf = _weight_fn(kind)
        counts = {}
        for word in enumerate_codewords(sf, partition=partition, budget=budget):
            w = wf(word)
            counts[w] = counts.get(w, 0) + 1
    return WeightDistribution(kind, counts)


def min_euclidean_weight(sf: StandardForm, cap: Optional[int] = None,
                         partition: Optional[Tuple[int, int]] = None,
                         budget: int = DEFAULT_BUDGET) -> MinWeightResult:
    """Smallest Euclidean weight among nonzero codewords.

    With a cap the scan may stop at the first codeword lighter than the
    cap; exact=False then flags the value as one such weight, not
    necessarily the minimum. exact=True means the full range was scanned.
    """
    size = sf.size()
    if size <= 1:
        raise DomainError("the zero code has no nonzero codeword")
    lo, hi = _slice_range(size, partition, budget)
    if lo >= hi:
        raise DomainError(f"empty partition slice {partition}")
    two_k = sf.modulus.two_k
    cap_val = 0 if cap is None else int(cap)
    if packing.packable(two_k):
        value, exact = backend.min_scan(sf.matrix.array, two_k,
                                        sf.coefficient_radices(), lo, hi, cap_val)
    else:
        best = 1 << 62
        exact = True
        for word in enumerate_codewords(sf, partition=partition, budget=budget):
            w = euclidean_weight(word)
            if 0 < w < best:
                best = w
                if cap is not None and best < cap:
                    exact = False
                    break
        value = best
    if value >= (1 << 62):
        # a slice may hold only the zero word
        raise DomainError("scanned range contains no nonzero codeword")
    return MinWeightResult(int(value), bool(exact))


def low_weight_codewords(sf: StandardForm, target: int,
                         kind: str = "euclidean",
                         partition: Optional[Tuple[int, int]] = None,
                         budget: int = DEFAULT_BUDGET) -> Set[ZVector]:
    """All codewords of exactly the target weight, in original coordinates."""
    _check_kind(kind)
    if target < 0:
        raise DomainError("weight target must be nonnegative")
    size = sf.size()
    lo, hi = _slice_range(size, partition, budget)
    if lo >= hi:
        return set()
    two_k = sf.modulus.two_k
    if packing.packable(two_k):
        k = sf.modulus.k
        maxw = sf.n * k * k if kind == "euclidean" else sf.n
        if target > maxw:
            return set()
        radices = sf.coefficient_radices()
        hist = backend.hist_scan(sf.matrix.array, two_k, radices, lo, hi,
                                 kind, maxw)
        expected = int(hist[target])
        if expected == 0:
            return set()
        words = backend.collect_scan(sf.matrix.array, two_k, radices, lo, hi,
                                     kind, target, expected)
        out = set()
        for row in words:
            coords = packing.unpack_word(row, two_k, sf.n)
            out.add(sf.to_original(ZVector(sf.modulus, coords)))
        return out
    wf = _weight_fn(kind)
    return {word for word in enumerate_codewords(sf, partition=partition,
                                                 budget=budget)
            if wf(word) == target}


def sample_weights(sf: StandardForm, trials: int, seed: int,
                   kind: str = "euclidean") -> WeightDistribution:
    """Weights of uniformly random codewords (counter-based RNG, reproducible)."""
    _check_kind(kind)
    if trials < 1:
        raise DomainError("need at least one trial")
    rng = np.random.Generator(np.random.Philox(seed))
    radices = np.array(sf.coefficient_radices(), dtype=np.int64)
    M = sf.matrix.array
    two_k = sf.modulus.two_k
    if kind == "euclidean":
        per = np.array(sf.modulus.euclidean_table(), dtype=np.int64)
    else:
        per = (np.arange(two_k) != 0).astype(np.int64)
    counts: Dict[int, int] = {}
    left = trials
    while left > 0:
        batch = min(left, 1 << 16)
        left -= batch
        if len(radices):
            coeffs = rng.integers(0, radices, size=(batch, len(radices)))
            words = coeffs @ M % two_k
        else:
            words = np.zeros((batch, sf.n), dtype=np.int64)
        w = per[words].sum(axis=1)
        vals, cnt = np.unique(w, return_counts=True)
        for v, c in zip(vals, cnt):
            counts[int(v)] = counts.get(int(v), 0) + int(c)
    return WeightDistribution(kind, counts)
