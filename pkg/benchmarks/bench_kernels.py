#!/usr/bin/env python3
"""Benchmark the pure-Python kernels against the compiled extension.

The workloads mirror the two hot paths in the test/acceptance suite: the
million-point round-trip profit scan used as the arbitrage oracle, and a
tight loop of single swap quotes.

Usage:
    python3 benchmarks/bench_kernels.py [--points 1000000] [--repeat 3]
"""

import argparse
import time

from xdmev._kernels import compiled, pure
from xdmev.fixedpoint import SCALE

POOLS = (2000 * SCALE, 100 * SCALE, 100 * SCALE, 3000 * SCALE, 0, 0)


def time_best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_grid_scan(backend, points: int):
    return backend.grid_scan(*POOLS, 0, 2000 * SCALE, points)


def bench_quotes(backend, count: int):
    out = 0
    for k in range(count):
        out = backend.swap_out(2000 * SCALE, 100 * SCALE, (k + 1) * SCALE // 7, 30)
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=1_000_000)
    parser.add_argument("--quotes", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("pure", pure)]
    if compiled is not None:
        backends.append(("compiled", compiled))
    else:
        print("compiled extension not built; benchmarking the fallback only")

    results = {}
    for name, backend in backends:
        sanity = bench_grid_scan(backend, 10_001)
        results.setdefault("sanity", set()).add(sanity)
        grid = time_best(lambda: bench_grid_scan(backend, args.points), args.repeat)
        quotes = time_best(lambda: bench_quotes(backend, args.quotes), args.repeat)
        results[name] = (grid, quotes)
        print(f"{name:>9}: grid_scan({args.points:,} pts) {grid:8.3f}s   "
              f"swap_out x{args.quotes:,} {quotes:7.3f}s")

    if len(results["sanity"]) != 1:
        print("ERROR: backends disagree on the sanity scan")
        return 1
    if "compiled" in results:
        grid_speedup = results["pure"][0] / results["compiled"][0]
        quote_speedup = results["pure"][1] / results["compiled"][1]
        print(f" speedup : grid_scan x{grid_speedup:.2f}   swap_out x{quote_speedup:.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
