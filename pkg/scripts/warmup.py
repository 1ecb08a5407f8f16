"""Warmup curves: cumulative hit ratio from an empty versus garbage-filled
start, for the vectorized policy and the exact-LRU baseline."""

import argparse
import sys
from pathlib import Path

from mslru.bench import run_experiment, write_csv, write_warmup_csv
from mslru.cache import CacheConfig
from mslru.workloads import WorkloadSpec, build_trace


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--capacity", type=int, default=4096)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--p", type=int, default=4, choices=(4, 8))
    ap.add_argument("--records", type=int, default=100_000)
    ap.add_argument("--ops", type=int, default=10_000_000)
    ap.add_argument("--alpha", type=float, default=0.99)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--out", default="results/warmup.csv")
    args = ap.parse_args(argv)

    spec = WorkloadSpec("zipfian", args.records, args.ops, args.alpha,
                        seed=args.seed)
    trace = build_trace(spec)
    reports = []
    for policy in ("multistep", "lru"):
        cfg = (CacheConfig("multistep", m=args.m, p=args.p,
                           capacity=args.capacity)
               if policy == "multistep"
               else CacheConfig("lru", capacity=args.capacity))
        for init in ("empty", "random"):
            rep = run_experiment(cfg, spec, trace=trace, init=init,
                                 warmup_curve=True)
            reports.append(rep)
            print(f"{policy:>9} init={init:<6}  "
                  f"final hit={100.0 * rep.hit_ratio:6.3f}%")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_csv(reports, args.out)
    write_warmup_csv(reports, args.out + ".warmup.csv")
    print(f"-> {args.out} and {args.out}.warmup.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
