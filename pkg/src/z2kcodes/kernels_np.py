"""Pure-numpy fallbacks for the scan kernels.

Scans split the rows into a low block whose full coefficient table fits
in memory (at most 2^16 combinations) and an outer odometer over the
remaining rows; each outer step processes the whole low block with
vectorized packed adds and table gathers. Results match the numba
kernels exactly; only the throughput differs.
"""

from __future__ import annotations

from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from . import packing

_LOW_LIMIT = 1 << 16


def _split_rows(radices: Sequence[int]) -> int:
    prod = 1
    split = 0
    for r in radices:
        if prod * r > _LOW_LIMIT:
            break
        prod *= r
        split += 1
    return split


def _combo_table(rows_packed: np.ndarray, radices: Sequence[int],
                 two_k: int) -> np.ndarray:
    """Packed words of every coefficient tuple, first row fastest."""
    L = rows_packed.shape[1]
    tab = np.zeros((1, L), dtype=np.uint64)
    for i, r in enumerate(radices):
        mults = np.zeros((r, L), dtype=np.uint64)
        for d in range(1, r):
            mults[d] = packing.add_packed(mults[d - 1], rows_packed[i], two_k)
        tab = packing.add_packed(tab[None, :, :], mults[:, None, :],
                                 two_k).reshape(-1, L)
    return tab


def _word_weights(words: np.ndarray, wtab: np.ndarray) -> np.ndarray:
    w = np.zeros(words.shape[0], dtype=np.int64)
    for l in range(words.shape[1]):
        lane = words[:, l]
        for shift in (0, 16, 32, 48):
            w += wtab[((lane >> np.uint64(shift)) & np.uint64(0xFFFF)).astype(np.int64)]
    return w


def _outer_blocks(rows_packed: np.ndarray, radices: Sequence[int],
                  two_k: int, start: int, end: int
                  ) -> Iterator[Tuple[np.ndarray, int, int]]:
    """Yield (low words + outer word, slice lo, slice hi) covering [start, end)."""
    K = rows_packed.shape[0]
    split = _split_rows(radices)
    low = _combo_table(rows_packed[:split], radices[:split], two_k)
    pl = low.shape[0]
    hi_radices = radices[split:]
    hi_first = start // pl
    hi_last = (end - 1) // pl
    # outer odometer word at hi_first
    digits = []
    idx = hi_first
    for r in hi_radices:
        digits.append(idx % r)
        idx //= r
    outer = np.zeros(rows_packed.shape[1], dtype=np.uint64)
    for i, d in enumerate(digits):
        for _ in range(d):
            outer = packing.add_packed(outer, rows_packed[split + i], two_k)
    for h in range(hi_first, hi_last + 1):
        lo = max(start - h * pl, 0)
        hi = min(end - h * pl, pl)
        words = packing.add_packed(low[lo:hi], outer[None, :], two_k)
        yield words, lo, hi
        if h < hi_last:
            i = 0
            while True:
                outer = packing.add_packed(outer, rows_packed[split + i], two_k)
                digits[i] += 1
                if digits[i] < hi_radices[i]:
                    break
                # wrapping adds radix*row = 0, handled by one more add
                digits[i] = 0
                i += 1


def hist_scan(M: np.ndarray, two_k: int, radices: Sequence[int],
              start: int, end: int, wtab: np.ndarray,
              maxw: int) -> np.ndarray:
    rows = packing.pack_rows(M, two_k)
    hist = np.zeros(maxw + 1, dtype=np.int64)
    for words, _, _ in _outer_blocks(rows, radices, two_k, start, end):
        w = _word_weights(words, wtab)
        hist += np.bincount(w, minlength=maxw + 1)
    return hist


def min_scan(M: np.ndarray, two_k: int, radices: Sequence[int],
             start: int, end: int, wtab: np.ndarray,
             cap: int) -> Tuple[int, bool]:
    rows = packing.pack_rows(M, two_k)
    best = 1 << 62
    for words, _, _ in _outer_blocks(rows, radices, two_k, start, end):
        w = _word_weights(words, wtab)
        nz = w[w > 0]
        if nz.size:
            m = int(nz.min())
            if m < best:
                best = m
                if best < cap:
                    return best, False
    return best, True


def collect_scan(M: np.ndarray, two_k: int, radices: Sequence[int],
                 start: int, end: int, wtab: np.ndarray,
                 target: int) -> np.ndarray:
    rows = packing.pack_rows(M, two_k)
    found = []
    for words, _, _ in _outer_blocks(rows, radices, two_k, start, end):
        w = _word_weights(words, wtab)
        idx = np.nonzero(w == target)[0]
        if idx.size:
            found.append(words[idx])
    if not found:
        return np.zeros((0, rows.shape[1]), dtype=np.uint64)
    return np.concatenate(found, axis=0)


def _lift_records(word: np.ndarray, h: int, A8: np.ndarray):
    """Per-lift (x2, omask, pq, asub) data of one weight-16 residue word.

    word is the unpacked mod-4 word; its head is the coefficient vector.
    A8 is the tail half of the Z8 rows. Yields one record per head
    toggle subset; head digits 3 lift to coefficient 7.
    """
    digits = word[:h]
    coeff = np.where(digits == 3, 7, digits)
    base_tail = coeff @ A8 % 8
    free = np.nonzero(digits == 2)[0]
    omask = 0
    for j in range(h):
        if word[h + j] == 2:
            omask |= 1 << j
    x2 = 0
    for i in range(h):
        if digits[i] & 1:
            x2 |= 1 << i
    tails = base_tail[None, :].repeat(1 << len(free), axis=0)
    for a in range(1 << len(free)):
        asub = 0
        for t in range(len(free)):
            if (a >> t) & 1:
                asub |= 1 << int(free[t])
                tails[a] = (tails[a] + 4 * A8[free[t]]) % 8
        pq = 0
        for j in range(h):
            if tails[a, j] in (3, 4, 5):
                pq |= 1 << j
        yield x2, omask, pq, asub


def exclusion_scan(G8: np.ndarray, h: int, start: int, end: int,
                   check_extremal: bool, bitset: np.ndarray,
                   wit_word: np.ndarray, wit_asub: np.ndarray,
                   wit_step: np.ndarray) -> Tuple[int, int]:
    """Numpy twin of kernels.exclusion_scan over coefficient range [start, end)."""
    R4 = G8 % 4
    radices = [4] * h
    wtab = packing.chunk_weight_table(4, "euclidean")
    rows = packing.pack_rows(R4, 4)
    A8 = G8[:, h:] % 8
    n_w16 = 0
    bad = 0
    for words, lo, hi in _outer_blocks(rows, radices, 4, start, end):
        w = _word_weights(words, wtab)
        if check_extremal:
            low = w[(w > 0) & (w < 16)]
            if low.size:
                return int(low[0]), n_w16
        idx = np.nonzero(w == 16)[0]
        for t in idx:
            vec = packing.unpack_word(words[t], 4, 2 * h)
            for x2, omask, pq, asub in _lift_records(vec, h, A8):
                om = omask & ~pq
                ss = om
                packed_res = int(packing.pack_word(vec, 4)[0])
                while True:
                    mm = pq | ss
                    if not (int(bitset[mm >> 6]) >> (mm & 63)) & 1:
                        bitset[mm >> 6] |= np.uint64(1) << np.uint64(mm & 63)
                        wit_word[mm] = packed_res
                        wit_asub[mm] = asub
                        wit_step[mm] = start  # slice marker; order-free
                    if ss == 0:
                        break
                    ss = (ss - 1) & om
            n_w16 += 1
    return bad, n_w16


def family_collect(G8: np.ndarray, h: int, start: int, end: int
                   ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int, int]:
    R4 = G8 % 4
    radices = [4] * h
    wtab = packing.chunk_weight_table(4, "euclidean")
    rows = packing.pack_rows(R4, 4)
    A8 = G8[:, h:] % 8
    x2s, os_, pqs = [], [], []
    n_w16 = 0
    for words, _, _ in _outer_blocks(rows, radices, 4, start, end):
        w = _word_weights(words, wtab)
        low = w[(w > 0) & (w < 16)]
        if low.size:
            return (np.array(x2s, dtype=np.uint16), np.array(os_, dtype=np.uint16),
                    np.array(pqs, dtype=np.uint16), n_w16, int(low[0]))
        idx = np.nonzero(w == 16)[0]
        for t in idx:
            vec = packing.unpack_word(words[t], 4, 2 * h)
            for x2, omask, pq, _ in _lift_records(vec, h, A8):
                x2s.append(x2)
                os_.append(omask)
                pqs.append(pq)
            n_w16 += 1
    return (np.array(x2s, dtype=np.uint16), np.array(os_, dtype=np.uint16),
            np.array(pqs, dtype=np.uint16), n_w16, 0)


def family_sweep(grp_of: np.ndarray, os_: np.ndarray, pqs: np.ndarray,
                 grp_toggles: np.ndarray, step2: np.ndarray, h: int,
                 src_lo: int, src_hi: int,
                 counts: np.ndarray, extflag: np.ndarray) -> None:
    universe = (1 << h) - 1 - h
    nbits = grp_toggles.shape[1]
    for s in range(src_lo, src_hi):
        togs = np.zeros(grp_toggles.shape[0], dtype=np.uint64)
        for b in range(nbits):
            if (s >> b) & 1:
                togs ^= grp_toggles[:, b].astype(np.uint64)
        marked = set()
        ext = True
        pq_all = pqs.astype(np.int64) ^ (togs[grp_of].astype(np.int64)
                                         & ~os_.astype(np.int64))
        if (pq_all == 0).any():
            ext = False
        for j in range(os_.shape[0]):
            o = int(os_[j])
            pq = int(pq_all[j])
            ss = o
            while True:
                marked.add(pq | ss)
                if ss == 0:
                    break
                ss = (ss - 1) & o
        for mm in step2:
            marked.add(int(mm))
        exc = sum(1 for mm in marked if bin(mm).count("1") >= 2)
        counts[s - src_lo] = universe - exc
        extflag[s - src_lo] = ext
