"""Throughput against thread count for the vectorized cache.

Single-machine numbers; on a small host the curve flattens as soon as the
workers outnumber the cores.
"""

import argparse
import os
import sys
from pathlib import Path

from mslru.bench import sweep, write_csv
from mslru.cache import CacheConfig
from mslru.workloads import WorkloadSpec


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--sets", type=int, default=4096)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--p", type=int, default=4, choices=(4, 8))
    ap.add_argument("--records", type=int, default=100_000)
    ap.add_argument("--ops", type=int, default=10_000_000)
    ap.add_argument("--alpha", type=float, default=0.99)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--touch-bytes", type=int, default=0)
    ap.add_argument("--out", default="results/scaling.csv")
    args = ap.parse_args(argv)

    cfg = CacheConfig("multistep", num_sets=args.sets, m=args.m, p=args.p)
    spec = WorkloadSpec("zipfian", args.records, args.ops, args.alpha,
                        seed=args.seed)
    print(f"host cores: {os.cpu_count()}")
    reports = sweep(cfg, spec, "threads", args.threads,
                    touch_bytes=args.touch_bytes)
    base = reports[0].throughput_ops_s
    for rep in reports:
        print(f"threads={rep.threads}  "
              f"{rep.throughput_ops_s / 1e6:6.2f} Mops/s  "
              f"speedup={rep.throughput_ops_s / base:4.2f}x")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_csv(reports, args.out)
    print(f"-> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
