#!/usr/bin/env python3
"""Profile the embedding pipeline across node counts and dimensions.

Prints the component table and the per-doubling growth ratios for
end-to-end time (node count at fixed d, and d at fixed node count).
"""

import argparse
import math
import statistics
import sys

from ordersketch.bench import format_bench_tsv, run_bench


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="25000,50000,100000")
    ap.add_argument("--dims", default="100,200")
    ap.add_argument("--multi-fraction", type=float, default=0.2)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="results/bench.tsv")
    args = ap.parse_args()

    sizes = [int(v) for v in args.sizes.split(",")]
    dims = [int(v) for v in args.dims.split(",")]

    run_bench([2000], [16], args.multi_fraction, args.seed)  # warmup
    e2e: dict[tuple[int, int], list[float]] = {}
    last = []
    for _ in range(args.repeats):
        last = run_bench(sizes, dims, args.multi_fraction, args.seed)
        for r in last:
            e2e.setdefault((r.nodes, r.d), []).append(r.end_to_end_s)

    from pathlib import Path

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(format_bench_tsv(last), encoding="utf-8")
    print(format_bench_tsv(last), end="")

    med = {cfg: statistics.median(ts) for cfg, ts in e2e.items()}
    d0 = dims[0]
    if len(sizes) >= 2:
        doublings = math.log2(sizes[-1] / sizes[0])
        ratio = (med[(sizes[-1], d0)] / med[(sizes[0], d0)]) ** (1 / doublings)
        print(f"end-to-end growth per node-count doubling (d={d0}): x{ratio:.2f}")
    if len(dims) >= 2:
        mid = sizes[len(sizes) // 2]
        doublings = math.log2(dims[-1] / dims[0])
        ratio = (med[(mid, dims[-1])] / med[(mid, dims[0])]) ** (1 / doublings)
        print(f"end-to-end growth per dimension doubling (n={mid}): x{ratio:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
