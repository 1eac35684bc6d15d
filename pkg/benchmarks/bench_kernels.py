"""Time the circle-counting kernel (numba vs numpy) and the full engines.

    python benchmarks/bench_kernels.py [--max-crossings 14] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from bracketforge import _kernels
from bracketforge.construct import two_bridge
from bracketforge.engines import (
    bracket_double_tree,
    bracket_perfect_matching,
    bracket_recursive,
    bracket_spanning_tree,
)
from bracketforge.linkcore import LinkDiagram


def kernel_inputs(d: LinkDiagram):
    u = d.universe
    partner = np.empty(4 * u.n, dtype=np.int64)
    for (c1, k1), (c2, k2) in u.ends.values():
        partner[4 * c1 + k1] = 4 * c2 + k2
        partner[4 * c2 + k2] = 4 * c1 + k1
    a_tab, b_tab = _kernels.smoothing_tables(np.asarray(d.over, dtype=np.int64))
    return partner, a_tab, b_tab


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-crossings", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    # compile once so the first row is not dominated by JIT time
    warm = LinkDiagram.all_negative(two_bridge([3]).universe)
    t = time.perf_counter()
    _kernels.loop_counts_numba(*kernel_inputs(warm))
    print(f"numba compile: {time.perf_counter() - t:.2f}s\n")

    print(f"{'n':>3} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for n in range(4, args.max_crossings + 1, 2):
        d = LinkDiagram.all_negative(two_bridge([n]).universe)
        ins = kernel_inputs(d)
        assert np.array_equal(_kernels.loop_counts_numpy(*ins), _kernels.loop_counts_numba(*ins))
        tn = best_of(lambda: _kernels.loop_counts_numpy(*ins), args.repeat)
        tj = best_of(lambda: _kernels.loop_counts_numba(*ins), args.repeat)
        print(f"{n:>3} {tn:>9.4f}s {tj:>9.4f}s {tn / tj:>7.1f}x")

    print(f"\n{'n':>3} {'recursive':>10} {'tree':>10} {'double':>10} {'matching':>10}")
    for n in range(4, min(args.max_crossings, 10) + 1, 2):
        cfg = two_bridge([n // 2, n - n // 2])
        d = LinkDiagram.all_negative(cfg.universe)
        row = [best_of(lambda: bracket_recursive(d), args.repeat),
               best_of(lambda: bracket_spanning_tree(d, cfg.labels), 1),
               best_of(lambda: bracket_double_tree(d, cfg.labels), 1),
               best_of(lambda: bracket_perfect_matching(cfg, d), 1)]
        print(f"{n:>3} " + " ".join(f"{x:>9.4f}s" for x in row))


if __name__ == "__main__":
    main()
