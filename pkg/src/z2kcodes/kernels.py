"""Numba scan kernels over bit-packed codewords.

Every scan walks a mixed-radix reflected Gray sequence over the row
coefficients, so each step is a single packed row addition. Lanes hold
1/2/4-bit coordinates; per-word weights come from 16-bit-chunk tables.
The mode argument selects the lanewise adder: 1 = xor (mod 2), 2 =
two-bit SWAR (mod 4), 3 = nibble add-and-mask (mod 8).
"""

import numpy as np
from numba import njit, int64, uint64

_M2 = uint64(0x5555555555555555)
_M8 = uint64(0x7777777777777777)
_CHUNK = uint64(0xFFFF)


@njit(cache=True, inline="always")
def _add_lane(a, b, mode):
    if mode == 1:
        return a ^ b
    if mode == 2:
        return a ^ b ^ ((a & b & _M2) << uint64(1))
    return (a + b) & _M8


@njit(cache=True, inline="always")
def _lane_weight(x, wtab):
    return (wtab[int64(x & _CHUNK)]
            + wtab[int64((x >> uint64(16)) & _CHUNK)]
            + wtab[int64((x >> uint64(32)) & _CHUNK)]
            + wtab[int64((x >> uint64(48)) & _CHUNK)])


@njit(cache=True, nogil=True)
def gray_hist(rows_pos, rows_neg, radices, digits, dirs, v, steps, wtab,
              hist, mode):
    K, L = rows_pos.shape
    w = int64(0)
    for l in range(L):
        w += _lane_weight(v[l], wtab)
    hist[w] += 1
    for _ in range(steps):
        i = 0
        while True:
            nd = digits[i] + dirs[i]
            if 0 <= nd < radices[i]:
                digits[i] = nd
                if dirs[i] > 0:
                    for l in range(L):
                        v[l] = _add_lane(v[l], rows_pos[i, l], mode)
                else:
                    for l in range(L):
                        v[l] = _add_lane(v[l], rows_neg[i, l], mode)
                break
            dirs[i] = -dirs[i]
            i += 1
        w = int64(0)
        for l in range(L):
            w += _lane_weight(v[l], wtab)
        hist[w] += 1


@njit(cache=True, nogil=True)
def gray_min(rows_pos, rows_neg, radices, digits, dirs, v, steps, wtab,
             cap, mode):
    # returns (best nonzero weight seen, 1 if the walk ran to completion)
    K, L = rows_pos.shape
    best = int64(1) << int64(62)
    w = int64(0)
    for l in range(L):
        w += _lane_weight(v[l], wtab)
    if 0 < w < best:
        best = w
        if best < cap:
            return best, int64(0)
    for _ in range(steps):
        i = 0
        while True:
            nd = digits[i] + dirs[i]
            if 0 <= nd < radices[i]:
                digits[i] = nd
                if dirs[i] > 0:
                    for l in range(L):
                        v[l] = _add_lane(v[l], rows_pos[i, l], mode)
                else:
                    for l in range(L):
                        v[l] = _add_lane(v[l], rows_neg[i, l], mode)
                break
            dirs[i] = -dirs[i]
            i += 1
        w = int64(0)
        for l in range(L):
            w += _lane_weight(v[l], wtab)
        if 0 < w < best:
            best = w
            if best < cap:
                return best, int64(0)
    return best, int64(1)


@njit(cache=True, nogil=True)
def gray_collect(rows_pos, rows_neg, radices, digits, dirs, v, steps, wtab,
                 target, out, mode):
    # out must be sized from a prior histogram pass
    K, L = rows_pos.shape
    cnt = int64(0)
    w = int64(0)
    for l in range(L):
        w += _lane_weight(v[l], wtab)
    if w == target:
        for l in range(L):
            out[cnt, l] = v[l]
        cnt += 1
    for _ in range(steps):
        i = 0
        while True:
            nd = digits[i] + dirs[i]
            if 0 <= nd < radices[i]:
                digits[i] = nd
                if dirs[i] > 0:
                    for l in range(L):
                        v[l] = _add_lane(v[l], rows_pos[i, l], mode)
                else:
                    for l in range(L):
                        v[l] = _add_lane(v[l], rows_neg[i, l], mode)
                break
            dirs[i] = -dirs[i]
            i += 1
        w = int64(0)
        for l in range(L):
            w += _lane_weight(v[l], wtab)
        if w == target:
            for l in range(L):
                out[cnt, l] = v[l]
            cnt += 1
    return cnt


@njit(cache=True, nogil=True)
def exclusion_scan(rows4, rows4neg, rows8lo, rows8hi, rowxorhi, w4tab, h,
                   digits, dirs, v, steps, step_base, check_extremal,
                   bitset, wit_word, wit_asub, wit_step):
    """Weight-16 residue walk marking excluded tail-support masks.

    The code is free [I | A] over Z8 with h rows and 2h coordinates;
    rows4/rows4neg are its packed mod-4 rows and their negatives (one
    64-bit lane), rows8lo/hi the packed Z8 halves, rowxorhi the xor
    masks adding 4*row on the tail half. Walks steps+1 Gray states from
    the given one. For each residue word of Euclidean weight 16 and
    each coefficient lift whose head avoids digits {3,4,5}, the tail
    masks (S3|S4|S5) | (any subset of S2|S6) of the lift are marked;
    the first marking of a mask records the residue word, the toggled
    coefficient subset and the global step as its witness. Returns
    (bad_weight, w16_count): bad_weight is a nonzero residue weight
    below 16 if check_extremal spots one (the walk aborts), else 0.
    """
    n_w16 = int64(0)
    for s in range(steps + 1):
        if s > 0:
            i = 0
            while True:
                nd = digits[i] + dirs[i]
                if 0 <= nd < 4:
                    digits[i] = nd
                    if dirs[i] > 0:
                        v = _add_lane(v, rows4[i], 2)
                    else:
                        v = _add_lane(v, rows4neg[i], 2)
                    break
                dirs[i] = -dirs[i]
                i += 1
        w = _lane_weight(v, w4tab)
        if w == 0 or w > 16:
            continue
        if w < 16:
            if check_extremal != 0:
                return w, n_w16
            continue
        n_w16 += 1
        gstep = step_base + s
        # base lift over Z8: head digit d -> coefficient 0,1,2,7
        blo = uint64(0)
        bhi = uint64(0)
        for i in range(h):
            d = digits[i]
            if d == 0:
                continue
            c = d
            if d == 3:
                c = 7
            for _ in range(c):
                blo = (blo + rows8lo[i]) & _M8
                bhi = (bhi + rows8hi[i]) & _M8
        # head digits equal to 2 may flip to 6: the toggle subset
        freelist = np.empty(16, dtype=np.int64)
        nf = 0
        for i in range(h):
            if digits[i] == 2:
                freelist[nf] = i
                nf += 1
        # tail positions where the residue is 2 (lift coord 2 or 6)
        omask = uint64(0)
        for j in range(h):
            if ((v >> uint64(2 * (h + j))) & uint64(3)) == uint64(2):
                omask |= uint64(1) << uint64(j)
        nsub = int64(1) << nf
        for a in range(nsub):
            hi = bhi
            asub = uint64(0)
            for t in range(nf):
                if (a >> t) & 1:
                    hi ^= rowxorhi[freelist[t]]
                    asub |= uint64(1) << uint64(freelist[t])
            pq = uint64(0)
            for j in range(h):
                t8 = (hi >> uint64(4 * j)) & uint64(0xF)
                if t8 == uint64(3) or t8 == uint64(4) or t8 == uint64(5):
                    pq |= uint64(1) << uint64(j)
            om = omask & ~pq
            ss = om
            while True:
                mm = int64(pq | ss)
                bit = uint64(1) << uint64(mm & 63)
                if (bitset[mm >> 6] & bit) == uint64(0):
                    bitset[mm >> 6] |= bit
                    wit_word[mm] = v
                    wit_asub[mm] = asub
                    wit_step[mm] = gstep
                elif gstep < wit_step[mm]:
                    # slices may run out of order; keep the earliest witness
                    wit_word[mm] = v
                    wit_asub[mm] = asub
                    wit_step[mm] = gstep
                if ss == uint64(0):
                    break
                ss = (ss - uint64(1)) & om
    return int64(0), n_w16


@njit(cache=True, nogil=True)
def family_collect(rows4, rows4neg, rows8lo, rows8hi, rowxorhi, w4tab, h,
                   digits, dirs, v, steps, out_x2, out_o, out_pq, cap):
    """Collect per-lift tail data for replaying scans over a source family.

    Emits one record per (weight-16 residue word, head toggle subset):
    x2 = odd head digits, o = tail {2,6} mask, pq = tail {3,4,5} mask.
    Returns (record count, weight-16 word count, bad_weight) where a
    nonzero bad_weight reports a nonzero residue weight below 16 (walk
    aborted: the residue code is not extremal).
    """
    cnt = int64(0)
    n_w16 = int64(0)
    for s in range(steps + 1):
        if s > 0:
            i = 0
            while True:
                nd = digits[i] + dirs[i]
                if 0 <= nd < 4:
                    digits[i] = nd
                    if dirs[i] > 0:
                        v = _add_lane(v, rows4[i], 2)
                    else:
                        v = _add_lane(v, rows4neg[i], 2)
                    break
                dirs[i] = -dirs[i]
                i += 1
        w = _lane_weight(v, w4tab)
        if w == 0 or w > 16:
            continue
        if w < 16:
            return cnt, n_w16, w
        n_w16 += 1
        blo = uint64(0)
        bhi = uint64(0)
        x2 = uint64(0)
        for i in range(h):
            d = digits[i]
            if d & 1:
                x2 |= uint64(1) << uint64(i)
            if d == 0:
                continue
            c = d
            if d == 3:
                c = 7
            for _ in range(c):
                blo = (blo + rows8lo[i]) & _M8
                bhi = (bhi + rows8hi[i]) & _M8
        freelist = np.empty(16, dtype=np.int64)
        nf = 0
        for i in range(h):
            if digits[i] == 2:
                freelist[nf] = i
                nf += 1
        omask = uint64(0)
        for j in range(h):
            if ((v >> uint64(2 * (h + j))) & uint64(3)) == uint64(2):
                omask |= uint64(1) << uint64(j)
        nsub = int64(1) << nf
        for a in range(nsub):
            hi = bhi
            for t in range(nf):
                if (a >> t) & 1:
                    hi ^= rowxorhi[freelist[t]]
            pq = uint64(0)
            for j in range(h):
                t8 = (hi >> uint64(4 * j)) & uint64(0xF)
                if t8 == uint64(3) or t8 == uint64(4) or t8 == uint64(5):
                    pq |= uint64(1) << uint64(j)
            if cnt < cap:
                out_x2[cnt] = x2
                out_o[cnt] = omask
                out_pq[cnt] = pq
            cnt += 1
    return cnt, n_w16, int64(0)


@njit(cache=True, nogil=True)
def family_sweep(grp_of, os_, pqs, grp_toggles, step2, popc, h, src_lo,
                 src_hi, counts, extflag):
    """Replay the exclusion scan for a range of family member indices.

    The family shares residue data; member s shifts each lift's pq mask
    by a toggle that depends only on the lift's x2 group: grp_toggles[g,b]
    is the tail pattern of nullspace generator b against group g, xored
    over the set bits of s. counts[s - src_lo] gets the candidate count
    (2^h - 1 - h minus excluded), extflag[s - src_lo] whether no lift of
    member s reaches Euclidean weight 16 exactly (source extremality).
    """
    nl = os_.shape[0]
    ngrp = grp_toggles.shape[0]
    nbits = grp_toggles.shape[1]
    nwords = (int64(1) << uint64(h)) >> 6
    if nwords < 1:
        nwords = 1
    bitset = np.zeros(nwords, dtype=np.uint64)
    togs = np.zeros(ngrp, dtype=np.uint64)
    universe = (int64(1) << int64(h)) - 1 - int64(h)
    for s in range(src_lo, src_hi):
        for q in range(nwords):
            bitset[q] = uint64(0)
        for g in range(ngrp):
            t = uint64(0)
            for b in range(nbits):
                if (s >> b) & 1:
                    t ^= grp_toggles[g, b]
            togs[g] = t
        ext = True
        for j in range(nl):
            o = uint64(os_[j])
            pq = uint64(pqs[j]) ^ (togs[grp_of[j]] & ~o)
            if pq == uint64(0):
                ext = False
            ss = o
            while True:
                mm = int64(pq | ss)
                bitset[mm >> 6] |= uint64(1) << uint64(mm & 63)
                if ss == uint64(0):
                    break
                ss = (ss - uint64(1)) & o
        for m2 in range(step2.shape[0]):
            mm = int64(step2[m2])
            bitset[mm >> 6] |= uint64(1) << uint64(mm & 63)
        exc = int64(0)
        for q in range(nwords):
            wq = bitset[q]
            exc += (popc[int64(wq & _CHUNK)]
                    + popc[int64((wq >> uint64(16)) & _CHUNK)]
                    + popc[int64((wq >> uint64(32)) & _CHUNK)]
                    + popc[int64((wq >> uint64(48)) & _CHUNK)])
        # marked masks of popcount < 2 are outside the candidate universe
        if (bitset[0] & uint64(1)) != uint64(0):
            exc -= 1
        for m in range(h):
            mm = int64(1) << m
            if (bitset[mm >> 6] >> uint64(mm & 63)) & uint64(1):
                exc -= 1
        counts[s - src_lo] = universe - exc
        extflag[s - src_lo] = ext
