"""Hot loops of the state-sum engine, with a numba path and a numpy path.

By default the numba path runs only for diagrams with at least
``NUMBA_MIN_CROSSINGS`` crossings, where its one-time compile pays off.
``BRACKETFORGE_NUMBA=0`` forces numpy everywhere, ``BRACKETFORGE_NUMBA=1``
forces numba everywhere.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    numba_installed = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_installed = False

__all__ = ["NUMBA_MIN_CROSSINGS", "use_numba", "loop_counts", "loop_counts_numpy",
           "loop_counts_numba",
           "smoothing_tables", "numba_installed"]


NUMBA_MIN_CROSSINGS = 12


def use_numba(n: int | None = None) -> bool:
    flag = os.environ.get("BRACKETFORGE_NUMBA", "")
    if not numba_installed or flag == "0":
        return False
    if flag == "1" or n is None:
        return True
    return n >= NUMBA_MIN_CROSSINGS


def smoothing_tables(over: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Slot pairings (n, 4) for the A- and B-smoothing of each crossing.

    The A-smoothing joins the corners swept by the over-strand turning
    counterclockwise; with over-slot ``a`` that pairs slots a+1/a+2 and a+3/a.
    """
    n = len(over)
    a_tab = np.empty((n, 4), dtype=np.int64)
    b_tab = np.empty((n, 4), dtype=np.int64)
    for c in range(n):
        a = int(over[c])
        for k in range(4):
            # partner of slot k within the crossing
            if (k - a) % 2 == 1:
                a_tab[c, k] = 4 * c + (k + 1) % 4
                b_tab[c, k] = 4 * c + (k - 1) % 4
            else:
                a_tab[c, k] = 4 * c + (k - 1) % 4
                b_tab[c, k] = 4 * c + (k + 1) % 4
    return a_tab, b_tab


def loop_counts_numpy(seg_partner: np.ndarray, a_tab: np.ndarray, b_tab: np.ndarray,
                      chunk: int = 1 << 14) -> np.ndarray:
    """Number of circles for every smoothing mask (bit i set = B at crossing i)."""
    n = a_tab.shape[0]
    nodes = 4 * n
    total = 1 << n
    out = np.empty(total, dtype=np.int64)
    steps = max(1, int(np.ceil(np.log2(max(nodes, 2)))) + 1)
    a_flat = a_tab.reshape(-1)
    b_flat = b_tab.reshape(-1)
    bitpos = np.repeat(np.arange(n), 4)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = (masks[:, None] >> bitpos[None, :]) & 1
        tau = np.where(bits == 1, b_flat[None, :], a_flat[None, :])
        perm = seg_partner[tau]
        label = np.broadcast_to(np.arange(nodes), perm.shape).copy()
        for _ in range(steps):
            label = np.minimum(label, np.take_along_axis(label, perm, axis=1))
            perm = np.take_along_axis(perm, perm, axis=1)
        cycles = (label == np.arange(nodes)[None, :]).sum(axis=1)
        out[start:start + len(masks)] = cycles // 2
    return out


def _loop_counts_py(seg_partner, a_tab, b_tab):
    n = a_tab.shape[0]
    nodes = 4 * n
    total = 1 << n
    out = np.empty(total, dtype=np.int64)
    seen = np.zeros(nodes, dtype=np.int64)
    stamp = 0
    for m in range(total):
        stamp += 1
        loops = 0
        for start in range(nodes):
            if seen[start] == stamp:
                continue
            loops += 1
            v = start
            while seen[v] != stamp:
                seen[v] = stamp
                w = seg_partner[v]
                seen[w] = stamp
                c = w // 4
                if (m >> c) & 1:
                    v = b_tab[c, w % 4]
                else:
                    v = a_tab[c, w % 4]
        out[m] = loops
    return out


if numba_installed:
    _loop_counts_jit = njit(cache=False)(_loop_counts_py)
else:  # pragma: no cover
    _loop_counts_jit = None


def loop_counts_numba(seg_partner, a_tab, b_tab) -> np.ndarray:
    if _loop_counts_jit is None:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    return _loop_counts_jit(np.ascontiguousarray(seg_partner, dtype=np.int64),
                            np.ascontiguousarray(a_tab, dtype=np.int64),
                            np.ascontiguousarray(b_tab, dtype=np.int64))


def loop_counts(seg_partner, a_tab, b_tab) -> np.ndarray:
    if use_numba(a_tab.shape[0]):
        return loop_counts_numba(seg_partner, a_tab, b_tab)
    return loop_counts_numpy(seg_partner, a_tab, b_tab)
