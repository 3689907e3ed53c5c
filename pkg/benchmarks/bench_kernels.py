"""Compiled versus pure-Python kernels on the workloads that dominate a census.

    python benchmarks/bench_kernels.py            # default sizes
    python benchmarks/bench_kernels.py --order 8  # heavier enumeration
    python benchmarks/bench_kernels.py --json     # machine-readable

Each row times the same inputs through both backends and reports the speedup.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from qspectra import _kernels
from qspectra.enumeration import enumerate_codes


def _random_rows(rng: random.Random, n: int) -> tuple[int, ...]:
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.5:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return tuple(rows)


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def workloads(order: int, seed: int):
    rng = random.Random(seed)
    graphs = [(12, _random_rows(rng, 12)) for _ in range(500)]
    codes = list(enumerate_codes(min(order, 8)))[:5000]
    parents = list(enumerate_codes(order - 1))
    return {
        "canonical_code, 500 random G(12, 1/2)":
            lambda k: [k.canonical_code(n, rows) for n, rows in graphs],
        f"extend_code, all {len(parents)} parents of order {order - 1}":
            lambda k: [k.extend_code(c) for c in parents],
        f"enumerate order {order}":
            lambda k: sum(1 for _ in enumerate_codes(order, extend=k.extend_code)),
        f"charpoly_code Q, {len(codes)} graphs":
            lambda k: [k.charpoly_code(c, "Q") for c in codes],
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    if _kernels.compiled is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    for name, job in workloads(args.order, args.seed).items():
        fast = _best(lambda: job(_kernels.compiled), args.repeat)
        slow = _best(lambda: job(_kernels.pure), args.repeat)
        rows.append({"workload": name, "compiled_s": round(fast, 4), "python_s": round(slow, 4),
                     "speedup": round(slow / fast, 1) if fast else None})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        width = max(len(r["workload"]) for r in rows)
        print(f"{'workload':<{width}}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
        for r in rows:
            print(f"{r['workload']:<{width}}  {r['compiled_s']:>9.4f}s  {r['python_s']:>9.4f}s  {r['speedup']:>7}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
