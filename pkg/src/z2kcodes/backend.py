"""Kernel backend selection and dispatch.

The environment variable Z2K_BACKEND picks the implementation of the
hot scan loops at call time: "numba" (default) runs the compiled
kernels, "numpy" the vectorized fallbacks. Results are identical;
only throughput differs.
"""

from __future__ import annotations

import os
from typing import Sequence, Tuple

import numpy as np

from . import packing
from .rings import DomainError

ENV_VAR = "Z2K_BACKEND"

_MODE = {2: 1, 4: 2, 8: 3}


def backend_name() -> str:
    name = os.environ.get(ENV_VAR, "numba").strip().lower()
    if name not in ("numba", "numpy"):
        raise DomainError(
            f"{ENV_VAR}={name!r} is not a backend (use numba or numpy)")
    return name


def _use_numba() -> bool:
    return backend_name() == "numba"


def _gray_prep(M: np.ndarray, two_k: int, radices: Sequence[int], start: int):
    digits, dirs = packing.gray_state(radices, start)
    word = digits @ M % two_k if len(radices) else np.zeros(M.shape[1], np.int64)
    v = packing.pack_word(word, two_k)
    rows_pos = packing.pack_rows(M, two_k)
    rows_neg = packing.pack_rows(-M % two_k, two_k)
    rad = np.asarray(radices, dtype=np.int64)
    return rows_pos, rows_neg, rad, digits, dirs, v


def hist_scan(M: np.ndarray, two_k: int, radices: Sequence[int],
              start: int, end: int, kind: str, maxw: int) -> np.ndarray:
    """Weight histogram of coefficient indices [start, end)."""
    wtab = packing.chunk_weight_table(two_k, kind)
    if not _use_numba():
        from . import kernels_np
        return kernels_np.hist_scan(M, two_k, radices, start, end, wtab, maxw)
    from . import kernels
    rows_pos, rows_neg, rad, digits, dirs, v = _gray_prep(M, two_k, radices, start)
    hist = np.zeros(maxw + 1, dtype=np.int64)
    kernels.gray_hist(rows_pos, rows_neg, rad, digits, dirs, v,
                      end - start - 1, wtab, hist, _MODE[two_k])
    return hist


def min_scan(M: np.ndarray, two_k: int, radices: Sequence[int],
             start: int, end: int, cap: int) -> Tuple[int, bool]:
    """Smallest nonzero weight over the range; early exit below cap.

    Returns (weight, completed): completed means the whole range was
    scanned, so the weight is the exact minimum of that range.
    """
    wtab = packing.chunk_weight_table(two_k, "euclidean")
    if not _use_numba():
        from . import kernels_np
        return kernels_np.min_scan(M, two_k, radices, start, end, wtab, cap)
    from . import kernels
    rows_pos, rows_neg, rad, digits, dirs, v = _gray_prep(M, two_k, radices, start)
    best, done = kernels.gray_min(rows_pos, rows_neg, rad, digits, dirs, v,
                                  end - start - 1, wtab, cap, _MODE[two_k])
    return int(best), bool(done)


def collect_scan(M: np.ndarray, two_k: int, radices: Sequence[int],
                 start: int, end: int, kind: str, target: int,
                 expected: int) -> np.ndarray:
    """All packed words of exactly the target weight in the range."""
    wtab = packing.chunk_weight_table(two_k, kind)
    if not _use_numba():
        from . import kernels_np
        return kernels_np.collect_scan(M, two_k, radices, start, end, wtab, target)
    from . import kernels
    rows_pos, rows_neg, rad, digits, dirs, v = _gray_prep(M, two_k, radices, start)
    out = np.zeros((expected, rows_pos.shape[1]), dtype=np.uint64)
    cnt = kernels.gray_collect(rows_pos, rows_neg, rad, digits, dirs, v,
                               end - start - 1, wtab, target, out, _MODE[two_k])
    return out[:cnt]


def _scan_prep_z8(G8: np.ndarray, h: int):
    R4 = G8 % 4
    rows4 = packing.pack_rows(R4, 4).ravel()
    rows4neg = packing.pack_rows(-R4 % 4, 4).ravel()
    rows8lo = packing.pack_rows(G8[:, :h] % 8, 8).ravel()
    rows8hi = packing.pack_rows(G8[:, h:] % 8, 8).ravel()
    rowxor = np.zeros(h, dtype=np.uint64)
    for i in range(h):
        m = np.uint64(0)
        for j in range(h):
            if G8[i, h + j] % 2:
                m |= np.uint64(0x4) << np.uint64(4 * j)
        rowxor[i] = m
    return rows4, rows4neg, rows8lo, rows8hi, rowxor


def exclusion_scan_range(G8: np.ndarray, h: int, start: int, end: int,
                         check_extremal: bool, bitset: np.ndarray,
                         wit_word: np.ndarray, wit_asub: np.ndarray,
                         wit_step: np.ndarray) -> Tuple[int, int]:
    """Run the weight-16 exclusion walk over [start, end).

    Marks excluded masks into bitset and witness arrays in place.
    Returns (bad_weight, w16_count); nonzero bad_weight means a nonzero
    residue weight below 16 turned up while check_extremal was set.
    """
    if not _use_numba():
        from . import kernels_np
        return kernels_np.exclusion_scan(G8, h, start, end, check_extremal,
                                         bitset, wit_word, wit_asub, wit_step)
    from . import kernels
    rows4, rows4neg, rows8lo, rows8hi, rowxor = _scan_prep_z8(G8, h)
    wtab = packing.chunk_weight_table(4, "euclidean")
    digits, dirs = packing.gray_state([4] * h, start)
    word = digits @ (G8 % 4) % 4
    v = packing.pack_word(word, 4)[0]
    bad, n_w16 = kernels.exclusion_scan(
        rows4, rows4neg, rows8lo, rows8hi, rowxor, wtab, h, digits, dirs, v,
        end - start - 1, start, 1 if check_extremal else 0,
        bitset, wit_word, wit_asub, wit_step)
    return int(bad), int(n_w16)


def family_collect_range(G8: np.ndarray, h: int, start: int, end: int
                         ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int, int]:
    """Collect per-lift (x2, o, pq) records over a coefficient range."""
    if not _use_numba():
        from . import kernels_np
        return kernels_np.family_collect(G8, h, start, end)
    from . import kernels
    rows4, rows4neg, rows8lo, rows8hi, rowxor = _scan_prep_z8(G8, h)
    wtab = packing.chunk_weight_table(4, "euclidean")
    cap = 1 << 14
    while True:
        digits, dirs = packing.gray_state([4] * h, start)
        word = digits @ (G8 % 4) % 4
        v = packing.pack_word(word, 4)[0]
        out_x2 = np.zeros(cap, dtype=np.uint16)
        out_o = np.zeros(cap, dtype=np.uint16)
        out_pq = np.zeros(cap, dtype=np.uint16)
        cnt, n_w16, bad = kernels.family_collect(
            rows4, rows4neg, rows8lo, rows8hi, rowxor, wtab, h, digits, dirs,
            v, end - start - 1, out_x2, out_o, out_pq, cap)
        if bad:
            return (out_x2[:0], out_o[:0], out_pq[:0], int(n_w16), int(bad))
        if cnt <= cap:
            return (out_x2[:cnt].copy(), out_o[:cnt].copy(),
                    out_pq[:cnt].copy(), int(n_w16), 0)
        cap = int(cnt)


def family_sweep_range(grp_of: np.ndarray, os_: np.ndarray, pqs: np.ndarray,
                       grp_toggles: np.ndarray, step2: np.ndarray, h: int,
                       src_lo: int, src_hi: int
                       ) -> Tuple[np.ndarray, np.ndarray]:
    """Candidate counts and extremality flags for member indices [lo, hi)."""
    counts = np.zeros(src_hi - src_lo, dtype=np.int64)
    extflag = np.zeros(src_hi - src_lo, dtype=np.bool_)
    if not _use_numba():
        from . import kernels_np
        kernels_np.family_sweep(grp_of, os_, pqs, grp_toggles, step2, h,
                                src_lo, src_hi, counts, extflag)
        return counts, extflag
    from . import kernels
    popc = packing.popcount16_table()
    kernels.family_sweep(grp_of.astype(np.int64), os_.astype(np.uint16),
                         pqs.astype(np.uint16), grp_toggles.astype(np.uint64),
                         step2.astype(np.int64), popc, h, src_lo, src_hi,
                         counts, extflag)
    return counts, extflag
