"""Vector-count sweep at fixed capacity, with per-vector hit breakdown.

The hit_loc columns in the CSV say which vector served each hit, so the
same file feeds both the ratio-vs-M line and the stacked breakdown bars.
"""

import argparse
import sys
from pathlib import Path

from mslru.bench import run_experiment, write_csv
from mslru.cache import CacheConfig
from mslru.workloads import WorkloadSpec, build_trace


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-values", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--capacity", type=int, default=16384)
    ap.add_argument("--p", type=int, default=4, choices=(4, 8))
    ap.add_argument("--dist", default="zipfian",
                    choices=("zipfian", "latest", "scan"))
    ap.add_argument("--alpha", type=float, default=0.99)
    ap.add_argument("--records", type=int, default=100_000)
    ap.add_argument("--ops", type=int, default=10_000_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--arc-reference", action="store_true",
                    help="append an arc row at the same capacity")
    ap.add_argument("--out", default="results/m_sweep.csv")
    args = ap.parse_args(argv)

    spec = WorkloadSpec(args.dist, args.records, args.ops, args.alpha,
                        seed=args.seed)
    trace = build_trace(spec)
    reports = []
    for m in args.m_values:
        cfg = CacheConfig("multistep", m=m, p=args.p, capacity=args.capacity)
        rep = run_experiment(cfg, spec, trace=trace)
        reports.append(rep)
        share = (100.0 * rep.location_hits[0] / rep.hits) if rep.hits else 0.0
        print(f"m={m}  hit={100.0 * rep.hit_ratio:6.3f}%  "
              f"vector-1 share={share:5.1f}%")
    if args.arc_reference:
        rep = run_experiment(CacheConfig("arc", capacity=args.capacity),
                             spec, trace=trace)
        reports.append(rep)
        print(f"arc  hit={100.0 * rep.hit_ratio:6.3f}%")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_csv(reports, args.out)
    print(f"-> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
