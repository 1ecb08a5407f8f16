"""Hit ratio against cache size for every policy on one shared trace.

Writes one CSV row per (policy, capacity). The vectorized policies run at
the requested lane width; the list baselines are width-independent but are
rerun per invocation so each CSV stands alone.
"""

import argparse
import sys
import time
from pathlib import Path

from mslru.bench import run_experiment, write_csv
from mslru.cache import CacheConfig
from mslru.workloads import WorkloadSpec, build_trace


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+",
                    default=[1024, 4096, 16384, 32768])
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--p", type=int, default=4, choices=(4, 8))
    ap.add_argument("--dist", default="zipfian")
    ap.add_argument("--alpha", type=float, default=0.99)
    ap.add_argument("--records", type=int, default=100_000)
    ap.add_argument("--ops", type=int, default=10_000_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="results/size_sweep.csv")
    args = ap.parse_args(argv)

    spec = WorkloadSpec(args.dist, args.records, args.ops, args.alpha,
                        seed=args.seed)
    trace = build_trace(spec)
    reports = []
    t0 = time.perf_counter()
    for cap in args.sizes:
        configs = [
            CacheConfig("arc", capacity=cap),
            CacheConfig("multistep", m=args.m, p=args.p, capacity=cap),
            CacheConfig("gclock", capacity=cap),
            CacheConfig("lru", capacity=cap),
            CacheConfig("invector", p=args.p, capacity=cap),
        ]
        for cfg in configs:
            rep = run_experiment(cfg, spec, trace=trace)
            reports.append(rep)
            print(f"{cfg.policy:>9} cap={cap:>6}  "
                  f"hit={100.0 * rep.hit_ratio:6.3f}%")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_csv(reports, args.out)
    print(f"{len(reports)} runs in {time.perf_counter() - t0:.1f}s "
          f"-> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
