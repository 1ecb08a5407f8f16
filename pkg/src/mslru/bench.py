"""Trace-driven experiment harness and its command line.

A run is: build (or load) a key trace, create one cache, push every key
through the get-or-insert flow, and report counters. The vectorized
policies execute inside a jitted runner that releases the GIL, so worker
threads genuinely interleave; the list policies run a plain Python loop and
are restricted to one thread. Timing covers only the request loop, never
trace generation or JIT compilation, which a tiny dry run pays for up
front.

Reports serialize to CSV (one fixed-schema row per run) or JSON (full
nested report). The warmup curve, when requested, goes into the JSON
report directly; with CSV output it lands in a sibling file
``<out>.warmup.csv`` so the main schema stays flat.
"""

import argparse
import json
import sys
import threading
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from numba import njit

from ._mix import splitmix64, stream_seed
from .cache import (LIST_POLICIES, POLICIES, CacheConfig, _set_index,
                    create_cache)
from .locking import acquire, release
from .multistep_set import (PUT_EVICTED, PUT_INSERTED, _iv_delete, _iv_get,
                            _iv_put, _set_delete, _set_get, _set_put)
from .workloads import WorkloadSpec, build_trace, read_trace, write_trace

CSV_COLUMNS = (
    "policy", "dist", "alpha", "records", "ops", "seed", "threads",
    "num_sets", "m", "p", "capacity", "init", "touch_bytes",
    "hits", "misses", "hit_ratio", "wall_time_s", "throughput_ops_s",
    "hit_loc_1", "hit_loc_2", "hit_loc_3", "hit_loc_4",
    "hit_loc_5", "hit_loc_6", "hit_loc_7", "hit_loc_8",
)

WARMUP_CSV_COLUMNS = ("policy", "dist", "seed", "init", "capacity",
                      "ops_completed", "hit_ratio")


@dataclass
class MetricsReport:
    """Everything one run produced, plus the knobs that produced it."""

    policy: str
    distribution: str
    alpha: float
    record_count: int
    operation_count: int
    seed: int
    threads: int
    num_sets: int
    m: int
    p: int
    capacity: int
    init: str
    touch_bytes: int
    hits: int
    misses: int
    hit_ratio: float
    # Hit counts by location: one entry per vector for the vectorized
    # policies, [T1, T2] for arc, [hits] for the single-structure policies.
    location_hits: list = field(default_factory=list)
    # (operations completed, cumulative hit ratio) pairs, log-spaced.
    warmup_checkpoints: list = field(default_factory=list)
    wall_time_s: float = 0.0
    throughput_ops_s: float = 0.0
    no_operations: bool = False


# ---------------------------------------------------------------------------
# jitted request loop for the vectorized policies

@njit(nogil=True)
def _run_flow_vector(trace, keys, vals, locks, empty, iv, touch_words,
                     payload, vec_hits, cps_at, cps_hits, counters):
    hits = np.int64(0)
    misses = np.int64(0)
    inserts = np.int64(0)
    evictions = np.int64(0)
    ci = 0
    sink = np.uint64(0)
    for i in range(trace.shape[0]):
        k = trace[i]
        s = _set_index(keys, k)
        acquire(locks, s)
        if iv:
            vi, val = _iv_get(keys, vals, s, k, empty)
        else:
            vi, val = _set_get(keys, vals, s, k, empty)
        release(locks, s)
        if vi >= 0:
            hits += 1
            vec_hits[vi] += 1
            if touch_words > 0:
                slot = np.int64(val)
                for w in range(touch_words):
                    sink += payload[slot, w]
        else:
            misses += 1
            v = np.uint64(k)
            if touch_words > 0:
                slot = np.int64(np.uint64(k) % np.uint64(payload.shape[0]))
                for w in range(touch_words):
                    payload[slot, w] = np.uint64(k)
                v = np.uint64(slot)
            acquire(locks, s)
            if iv:
                code, _ev = _iv_put(keys, vals, s, k, v, empty)
            else:
                code, _ev = _set_put(keys, vals, s, k, v, empty)
            release(locks, s)
            if code == PUT_INSERTED:
                inserts += 1
            elif code == PUT_EVICTED:
                inserts += 1
                evictions += 1
        if ci < cps_at.shape[0] and i + 1 == cps_at[ci]:
            cps_hits[ci] = hits
            ci += 1
    counters[0] += hits
    counters[1] += misses
    counters[2] += inserts
    counters[3] += evictions
    # Fold the payload reads into an output so they cannot be dead code.
    counters[4] += np.int64(sink & np.uint64(0x7FFFFFFF))


@njit(nogil=True)
def _run_stress(seed, n_ops, key_range, keys, vals, locks, empty, iv,
                counters):
    # Mixed get/put/delete stream from an in-kernel PRNG: 6/3/1 ratio.
    # Counter layout: hits, misses, inserts, evictions, deletions, then
    # issued gets/puts/deletes, so the caller can detect a worker that died
    # mid-stream.
    state = seed
    hits = np.int64(0)
    misses = np.int64(0)
    inserts = np.int64(0)
    evictions = np.int64(0)
    deletions = np.int64(0)
    gets = np.int64(0)
    puts = np.int64(0)
    dels = np.int64(0)
    for _ in range(n_ops):
        state, z1 = splitmix64(state)
        state, z2 = splitmix64(state)
        k = np.uint64(1) + z1 % np.uint64(key_range)
        op = z2 % np.uint64(10)
        s = _set_index(keys, k)
        if op < 6:
            gets += 1
            acquire(locks, s)
            if iv:
                vi, _val = _iv_get(keys, vals, s, k, empty)
            else:
                vi, _val = _set_get(keys, vals, s, k, empty)
            release(locks, s)
            if vi >= 0:
                hits += 1
            else:
                misses += 1
        elif op < 9:
            puts += 1
            acquire(locks, s)
            if iv:
                code, _ev = _iv_put(keys, vals, s, k, k, empty)
            else:
                code, _ev = _set_put(keys, vals, s, k, k, empty)
            release(locks, s)
            if code == PUT_INSERTED:
                inserts += 1
            elif code == PUT_EVICTED:
                inserts += 1
                evictions += 1
        else:
            dels += 1
            acquire(locks, s)
            if iv:
                ok = _iv_delete(keys, vals, s, k, empty)
            else:
                ok = _set_delete(keys, vals, s, k, empty)
            release(locks, s)
            if ok:
                deletions += 1
    counters[0] += hits
    counters[1] += misses
    counters[2] += inserts
    counters[3] += evictions
    counters[4] += deletions
    counters[5] += gets
    counters[6] += puts
    counters[7] += dels


# ---------------------------------------------------------------------------
# python request loop for the list policies

def _run_flow_python(cache, trace, cps_at, payload, touch_words):
    hits = misses = inserts = evictions = 0
    loc_hits = [0, 0]
    cps_hits = []
    ci = 0
    pos = 0
    pool = payload.shape[0] if payload is not None else 0
    n_cps = len(cps_at)
    for start in range(0, trace.size, 1_000_000):
        for k in trace[start:start + 1_000_000].tolist():
            res = cache.get(k)
            if res.hit:
                hits += 1
                if res.location == "t2":
                    loc_hits[1] += 1
                else:
                    loc_hits[0] += 1
                if touch_words:
                    _ = int(payload[res.value, touch_words - 1])
            else:
                misses += 1
                inserts += 1
                if touch_words:
                    slot = k % pool
                    payload[slot, :touch_words] = k
                    ev = cache.put(k, slot)
                else:
                    ev = cache.put(k)
                if ev is not None:
                    evictions += 1
            pos += 1
            if ci < n_cps and pos == cps_at[ci]:
                cps_hits.append(hits)
                ci += 1
    return hits, misses, inserts, evictions, loc_hits, cps_hits


def _checkpoint_schedule(operation_count):
    """Half-decade points from 1000 up, ending exactly at the run length."""
    points = []
    x = 3.0
    while True:
        v = int(10 ** x)
        if v >= operation_count:
            break
        if v >= 1000:
            points.append(v)
        x += 0.5
    points.append(operation_count)
    return sorted(set(points))


def _split_counts(total, parts):
    base = total // parts
    return [base + (1 if i < total % parts else 0) for i in range(parts)]


# ---------------------------------------------------------------------------
# experiment driver

def run_experiment(config, spec, *, threads=1, init="empty", touch_bytes=0,
                   warmup_curve=False, trace=None, record_trace_path=None):
    """One cache, one trace, full request flow; returns a MetricsReport.

    ``trace`` replays an explicit key array instead of generating from the
    spec (the spec still labels the report). ``record_trace_path`` saves the
    generated trace in the binary format for later replay.
    """
    if threads < 1:
        raise ValueError("threads must be at least 1")
    if threads > 1 and config.policy in LIST_POLICIES:
        raise ValueError(f"policy {config.policy} runs single-threaded only")
    if threads > 1 and warmup_curve:
        raise ValueError("the warmup curve needs a single global request order")
    if touch_bytes < 0 or touch_bytes > 4096:
        raise ValueError("touch_bytes out of range")
    touch_words = (touch_bytes + 7) // 8

    def make_report(**kw):
        base = dict(policy=config.policy, distribution=spec.distribution,
                    alpha=spec.alpha, record_count=spec.record_count,
                    operation_count=0, seed=spec.seed, threads=threads,
                    num_sets=config.num_sets or 0, m=config.m, p=config.p,
                    capacity=config.capacity, init=init,
                    touch_bytes=touch_bytes, hits=0, misses=0, hit_ratio=0.0)
        base.update(kw)
        return MetricsReport(**base)

    if trace is not None:
        parts = np.array_split(np.asarray(trace, dtype=np.uint64), threads)
    else:
        sizes = _split_counts(spec.operation_count, threads)
        parts = [build_trace(
            WorkloadSpec(spec.distribution, spec.record_count, sizes[t],
                         spec.alpha, spec.max_scan_length, spec.seed),
            stream=t) for t in range(threads)]
    total_ops = int(sum(p.size for p in parts))

    if record_trace_path is not None:
        key_width = 4 if (config.is_vectorized and config.p == 8) else 8
        write_trace(record_trace_path, np.concatenate(parts),
                    spec.record_count, key_width=key_width)

    if total_ops == 0:
        return make_report(no_operations=True)

    cache = create_cache(config, init=init)
    cps_at = _checkpoint_schedule(total_ops) if warmup_curve else []
    pool_rows = max(1, config.capacity)

    if config.is_vectorized:
        dt = cache.keys.dtype
        limit = int(np.iinfo(dt).max)
        for part in parts:
            if part.size and int(part.max()) >= limit:
                raise ValueError(f"trace keys do not fit {dt} lanes")
        parts = [np.ascontiguousarray(part.astype(dt)) for part in parts]
        payload = np.zeros((pool_rows if touch_words else 1,
                            max(1, touch_words)), dtype=np.uint64)
        cps_at_arr = np.asarray(cps_at, dtype=np.int64)
        cps_hits_arr = np.zeros(len(cps_at), dtype=np.int64)
        counters = np.zeros((threads, 5), dtype=np.int64)
        vec_hits = np.zeros((threads, config.m), dtype=np.int64)
        _warm_vector_runner(config, dt)
        none_cps = np.empty(0, dtype=np.int64)
        none_hits = np.empty(0, dtype=np.int64)
        start = time.perf_counter()
        if threads == 1:
            _run_flow_vector(parts[0], cache.keys, cache.values, cache.locks,
                             cache.empty, cache.use_invector, touch_words,
                             payload, vec_hits[0], cps_at_arr, cps_hits_arr,
                             counters[0])
        else:
            workers = [
                threading.Thread(
                    target=_run_flow_vector,
                    args=(parts[t], cache.keys, cache.values, cache.locks,
                          cache.empty, cache.use_invector, touch_words,
                          payload, vec_hits[t], none_cps, none_hits,
                          counters[t]))
                for t in range(threads)]
            for w in workers:
                w.start()
            for w in workers:
                w.join()
        wall = time.perf_counter() - start
        hits = int(counters[:, 0].sum())
        misses = int(counters[:, 1].sum())
        location_hits = [int(x) for x in vec_hits.sum(axis=0)]
        cps_hits = [int(x) for x in cps_hits_arr]
    else:
        payload = (np.zeros((pool_rows, touch_words), dtype=np.uint64)
                   if touch_words else None)
        start = time.perf_counter()
        hits, misses, _ins, _ev, loc_hits, cps_hits = _run_flow_python(
            cache, parts[0], cps_at, payload, touch_words)
        wall = time.perf_counter() - start
        if config.policy == "arc":
            location_hits = loc_hits
        else:
            location_hits = [hits]

    cache.audit()
    checkpoints = [(ops, h / ops) for ops, h in zip(cps_at, cps_hits)]
    return make_report(
        operation_count=total_ops, hits=hits, misses=misses,
        hit_ratio=hits / total_ops, location_hits=location_hits,
        warmup_checkpoints=checkpoints, wall_time_s=wall,
        throughput_ops_s=total_ops / wall if wall > 0 else 0.0)


_WARMED = set()


def _warm_vector_runner(config, dt):
    # Pay JIT compilation outside the timed section, once per signature.
    sig = (config.policy, dt.name)
    if sig in _WARMED:
        return
    small = CacheConfig(config.policy, m=config.m, p=config.p, num_sets=1)
    c = create_cache(small)
    z = np.zeros(0, dtype=np.int64)
    _run_flow_vector(np.ones(2, dtype=dt), c.keys, c.values, c.locks,
                     c.empty, c.use_invector, 1,
                     np.zeros((1, 1), dtype=np.uint64),
                     np.zeros(config.m, dtype=np.int64), z, z,
                     np.zeros(5, dtype=np.int64))
    _WARMED.add(sig)


def stress(config, *, operations=1_000_000, threads=8, key_range=None,
           seed=7):
    """Concurrent mixed-operation self-check for the vectorized cache.

    Every thread runs an independent get/put/delete stream against one
    shared cache. Afterwards the cache must audit clean and the summed
    insert/eviction/deletion counters must equal the occupancy exactly;
    any lost update or torn lane breaks one of the two.
    """
    if not config.is_vectorized:
        raise ValueError("stress drives the vectorized cache only")
    if key_range is None:
        key_range = 4 * config.capacity
    counters = np.zeros((threads, 8), dtype=np.int64)
    # Compile on a one-set throwaway before spawning workers.
    tiny = create_cache(CacheConfig(config.policy, m=config.m, p=config.p,
                                    num_sets=1))
    _run_stress(np.uint64(1), 2, key_range, tiny.keys, tiny.values,
                tiny.locks, tiny.empty, tiny.use_invector,
                np.zeros(8, dtype=np.int64))
    cache = create_cache(config)
    ops = _split_counts(operations, threads)
    start = time.perf_counter()
    workers = [
        threading.Thread(
            target=_run_stress,
            args=(np.uint64(stream_seed(seed, t)), ops[t], key_range,
                  cache.keys, cache.values, cache.locks, cache.empty,
                  cache.use_invector, counters[t]))
        for t in range(threads)]
    for w in workers:
        w.start()
    for w in workers:
        w.join()
    wall = time.perf_counter() - start
    totals = counters.sum(axis=0)
    occupancy = len(cache)
    audit_ok = cache.audit()
    issued = int(totals[5] + totals[6] + totals[7])
    return {
        "operations": operations,
        "threads": threads,
        "hits": int(totals[0]),
        "misses": int(totals[1]),
        "inserts": int(totals[2]),
        "evictions": int(totals[3]),
        "deletions": int(totals[4]),
        "gets_issued": int(totals[5]),
        "puts_issued": int(totals[6]),
        "deletes_issued": int(totals[7]),
        "operations_issued": issued,
        "occupancy": occupancy,
        "conserved": (issued == operations
                      and int(totals[0] + totals[1]) == int(totals[5])
                      and int(totals[2] - totals[3] - totals[4]) == occupancy),
        "locks_free": not cache.locks.any(),
        "audit_ok": audit_ok,
        "wall_time_s": wall,
    }


def sweep(config, spec, axis, values, **run_kw):
    """run_experiment over one swept knob; returns the reports in order.

    axis "capacity" rescales the cache (sets follow), "m" changes the
    vector count at fixed capacity, "threads" changes only the worker
    count.
    """
    reports = []
    for v in values:
        if axis == "capacity":
            cfg = CacheConfig(config.policy, m=config.m, p=config.p,
                              capacity=int(v))
        elif axis == "m":
            cfg = CacheConfig(config.policy, m=int(v), p=config.p,
                              capacity=config.capacity)
        elif axis == "threads":
            reports.append(run_experiment(config, spec, threads=int(v),
                                          **run_kw))
            continue
        else:
            raise ValueError(f"unknown sweep axis {axis!r}")
        reports.append(run_experiment(cfg, spec, **run_kw))
    return reports


# ---------------------------------------------------------------------------
# serialization

def report_row(report):
    """Flatten one report onto the fixed CSV schema."""
    loc = list(report.location_hits)[:8]
    loc += [0] * (8 - len(loc))
    row = {
        "policy": report.policy,
        "dist": report.distribution,
        "alpha": report.alpha,
        "records": report.record_count,
        "ops": report.operation_count,
        "seed": report.seed,
        "threads": report.threads,
        "num_sets": report.num_sets or "",
        "m": report.m,
        "p": report.p,
        "capacity": report.capacity,
        "init": report.init,
        "touch_bytes": report.touch_bytes,
        "hits": report.hits,
        "misses": report.misses,
        "hit_ratio": f"{report.hit_ratio:.6f}",
        "wall_time_s": f"{report.wall_time_s:.4f}",
        "throughput_ops_s": f"{report.throughput_ops_s:.1f}",
    }
    for i in range(8):
        row[f"hit_loc_{i + 1}"] = loc[i]
    return row


def write_csv(reports, path):
    import csv
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in reports:
            w.writerow(report_row(r))


def write_warmup_csv(reports, path):
    import csv
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=WARMUP_CSV_COLUMNS)
        w.writeheader()
        for r in reports:
            for ops, ratio in r.warmup_checkpoints:
                w.writerow({"policy": r.policy, "dist": r.distribution,
                            "seed": r.seed, "init": r.init,
                            "capacity": r.capacity, "ops_completed": ops,
                            "hit_ratio": f"{ratio:.6f}"})


def write_json(reports, path):
    with open(path, "w") as f:
        json.dump({"runs": [asdict(r) for r in reports]}, f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------------------
# command line

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="bench",
        description="Run one cache policy over one synthetic trace and "
                    "report hit ratios and throughput.")
    ap.add_argument("--policy", required=True, choices=list(POLICIES))
    ap.add_argument("--sets", type=int, default=None,
                    help="number of sets for the vectorized policies")
    ap.add_argument("--m", type=int, default=2,
                    help="vectors per set (1, 2, 4, or 8)")
    ap.add_argument("--p", type=int, default=4, choices=(4, 8),
                    help="lanes per vector; 8 switches to 32-bit keys")
    ap.add_argument("--capacity", type=int, default=None,
                    help="total items; alternative to --sets")
    ap.add_argument("--dist", default="zipfian",
                    choices=("zipfian", "latest", "scan"))
    ap.add_argument("--alpha", type=float, default=0.99)
    ap.add_argument("--records", type=int, default=100_000)
    ap.add_argument("--ops", type=int, default=1_000_000)
    ap.add_argument("--max-scan-len", type=int, default=100)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--init", default="empty", choices=("empty", "random"))
    ap.add_argument("--touch-bytes", type=int, default=0,
                    help="payload bytes written per miss and read per hit")
    ap.add_argument("--warmup-curve", action="store_true",
                    help="record log-spaced cumulative hit-ratio checkpoints")
    ap.add_argument("--breakdown", action="store_true",
                    help="print the per-location hit breakdown")
    ap.add_argument("--out", default=None, help="report file")
    ap.add_argument("--format", default="csv", choices=("csv", "json"))
    ap.add_argument("--record-trace", default=None, metavar="FILE")
    ap.add_argument("--replay-trace", default=None, metavar="FILE")
    return ap


def main(argv=None):
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.record_trace and args.replay_trace:
        ap.error("--record-trace and --replay-trace are mutually exclusive")

    try:
        config = CacheConfig(args.policy, num_sets=args.sets, m=args.m,
                             p=args.p, capacity=args.capacity)
    except ValueError as e:
        ap.error(str(e))

    trace = None
    records = args.records
    ops = args.ops
    if args.replay_trace:
        trace, meta = read_trace(args.replay_trace)
        ops = trace.size
        records = meta.get("record_count", records)
    spec = WorkloadSpec(args.dist, records, ops, args.alpha,
                        args.max_scan_len, args.seed)

    try:
        report = run_experiment(config, spec, threads=args.threads,
                                init=args.init, touch_bytes=args.touch_bytes,
                                warmup_curve=args.warmup_curve, trace=trace,
                                record_trace_path=args.record_trace)
    except ValueError as e:
        print(f"bench: {e}", file=sys.stderr)
        return 1

    if report.no_operations:
        print("no operations requested; nothing measured")
    else:
        print(f"{report.policy}: {report.hits}/{report.operation_count} hits "
              f"({100.0 * report.hit_ratio:.2f}%), "
              f"{report.throughput_ops_s / 1e6:.2f} Mops/s "
              f"in {report.wall_time_s:.2f}s")
    if args.breakdown and not report.no_operations:
        labels = (["t1", "t2"] if report.policy == "arc" else
                  [f"v{i + 1}" for i in range(len(report.location_hits))])
        parts = ", ".join(f"{lab}={n}" for lab, n in
                          zip(labels, report.location_hits))
        print(f"hit breakdown: {parts}")

    if args.out:
        if args.format == "json":
            write_json([report], args.out)
        else:
            write_csv([report], args.out)
            if args.warmup_curve:
                write_warmup_csv([report], args.out + ".warmup.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
