"""Independent brute-force reference implementations used across the tests.

Everything here is deliberately naive: spans by exhausting coefficient
tuples, duals by scanning the whole ambient space, weights straight from
the definition. Test assertions compare the package against these.
"""

import itertools
from typing import Dict, Iterable, Set, Tuple

Word = Tuple[int, ...]


def span_set(rows: Iterable[Word], two_k: int, n: int = None) -> Set[Word]:
    """All Z_two_k-linear combinations of the given rows."""
    rows = [tuple(r) for r in rows]
    if not rows:
        if n is None:
            raise ValueError("empty row list needs an explicit length")
        return {(0,) * n}
    n = len(rows[0])
    out = set()
    for coeffs in itertools.product(range(two_k), repeat=len(rows)):
        w = [0] * n
        for c, r in zip(coeffs, rows):
            for i in range(n):
                w[i] += c * r[i]
        out.add(tuple(x % two_k for x in w))
    return out


def dual_set(rows: Iterable[Word], two_k: int, n: int) -> Set[Word]:
    """All vectors of Z_two_k^n orthogonal to every row."""
    rows = [tuple(r) for r in rows]
    out = set()
    for v in itertools.product(range(two_k), repeat=n):
        if all(sum(a * b for a, b in zip(v, r)) % two_k == 0 for r in rows):
            out.add(v)
    return out


def euclid(w: Word, two_k: int) -> int:
    return sum(min(x * x, (two_k - x) ** 2) for x in w)


def all_weights_doubly_even(words: Iterable[Word], two_k: int) -> bool:
    return all(euclid(w, two_k) % (2 * two_k) == 0 for w in words)


def weight_histogram(words: Iterable[Word], two_k: int) -> Dict[int, int]:
    hist: Dict[int, int] = {}
    for w in words:
        e = euclid(w, two_k)
        hist[e] = hist.get(e, 0) + 1
    return hist


def hamming_histogram(words: Iterable[Word]) -> Dict[int, int]:
    hist: Dict[int, int] = {}
    for w in words:
        h = sum(1 for x in w if x)
        hist[h] = hist.get(h, 0) + 1
    return hist
