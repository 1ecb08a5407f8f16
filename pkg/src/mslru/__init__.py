"""Set-associative caching with multi-step LRU replacement.

The replacement state of a set is M short vectors of P keys, updated by
whole-vector permutations instead of pointer surgery; one request moves an
item at most one step toward the set's MRU position. The package bundles
the cache itself, exact-LRU / GCLOCK / ARC baselines, synthetic workload
generators, and a benchmark harness that drives them all through the same
get-or-insert flow.
"""

from .baselines import ArcCache, GclockCache, LruCache
from .bench import MetricsReport, run_experiment, stress, sweep
from .cache import (CacheConfig, CacheLookup, ListPolicyCache,
                    SetAssociativeCache, create_cache, hash_to_set)
from .multistep_set import SetBlock, SetLookupResult
from .workloads import (WorkloadSpec, build_trace, read_trace, run_flow,
                        write_trace)

__all__ = [
    "ArcCache", "CacheConfig", "CacheLookup", "GclockCache",
    "ListPolicyCache", "LruCache", "MetricsReport", "SetAssociativeCache",
    "SetBlock", "SetLookupResult", "WorkloadSpec", "build_trace",
    "create_cache", "hash_to_set", "read_trace", "run_experiment",
    "run_flow", "stress", "sweep", "write_trace",
]

__version__ = "0.1.0"
