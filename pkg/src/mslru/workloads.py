"""Synthetic key streams: zipfian, latest, and scan request patterns.

Key generation is exact, not approximate: zipf ranks come from the
rejection-inversion sampler for bounded power laws (Hormann and Derflinger),
which draws in O(1) from precomputed integral bounds and is accurate at any
alpha > 0 including 1. Ranks are then pushed through a keyed bijection on
[1, record_count] ("scrambling") so that popularity is uncorrelated with key
order and with the hash that picks cache sets.

The latest pattern models a growing dataset: requests favor the newest keys,
with rank 1 at the insert frontier. The frontier starts at record_count and
advances the first time any key is requested, a proxy for the insert that a
read-miss triggers; this keeps traces a pure function of (spec, stream),
independent of which cache consumes them. Latest keys are recency indices
and are deliberately not scrambled. Scans pick a scrambled zipfian start and
walk keys sequentially for a uniform random length.

Everything is driven by splitmix64 streams, so a (spec, stream) pair always
yields the same trace whether drawn one key at a time through the generator
classes or in bulk through build_trace; tests compare the two paths.
"""

import math
import struct
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._mix import splitmix64, stream_seed, uniform01

DISTRIBUTIONS = ("zipfian", "latest", "scan")

_TRACE_MAGIC = b"MSLRUTRC"
_TRACE_VERSION = 1


@dataclass(frozen=True)
class WorkloadSpec:
    """What to generate: the pattern, its skew, and the key space."""

    distribution: str
    record_count: int = 100_000
    operation_count: int = 1_000_000
    alpha: float = 0.99
    max_scan_length: int = 100
    seed: int = 1

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.record_count < 1:
            raise ValueError("record_count must be at least 1")
        if self.operation_count < 0:
            raise ValueError("operation_count must be non-negative")
        if not (self.alpha > 0.0):
            raise ValueError("alpha must be positive")
        if self.max_scan_length < 1:
            raise ValueError("max_scan_length must be at least 1")


# ---------------------------------------------------------------------------
# bounded zipf via rejection inversion
#
# H(x) is the antiderivative of the unnormalized mass h(x) = x^-alpha,
# written through log1p/expm1 quotients so alpha = 1 is just another input
# rather than a special case.

@njit(cache=True, nogil=True, inline="always")
def _helper1(x):
    # log1p(x)/x, stable near zero.
    if abs(x) > 1e-8:
        return math.log1p(x) / x
    return 1.0 - x / 2.0 + x * x / 3.0


@njit(cache=True, nogil=True, inline="always")
def _helper2(x):
    # expm1(x)/x, stable near zero.
    if abs(x) > 1e-8:
        return math.expm1(x) / x
    return 1.0 + x / 2.0 + x * x / 6.0


@njit(cache=True, nogil=True, inline="always")
def _h_integral(x, alpha):
    logx = math.log(x)
    return _helper2((1.0 - alpha) * logx) * logx


@njit(cache=True, nogil=True, inline="always")
def _h(x, alpha):
    return math.exp(-alpha * math.log(x))


@njit(cache=True, nogil=True, inline="always")
def _h_integral_inverse(x, alpha):
    t = x * (1.0 - alpha)
    if t < -1.0:
        t = -1.0
    return math.exp(_helper1(t) * x)


@njit(cache=True, nogil=True, inline="always")
def _zipf_tail_cutoff(alpha):
    # Gap below which a candidate rank is accepted without the integral
    # test; one constant per alpha.
    return 2.0 - _h_integral_inverse(_h_integral(2.5, alpha) - _h(2.0, alpha),
                                     alpha)


@njit(cache=True, nogil=True)
def _zipf_draw(state, n, alpha, h_x1, h_n, cutoff):
    # One rank in [1, n]; h_x1 and h_n bound the inverted integral, cutoff
    # short-circuits the accept test for the common small ranks.
    if n == 1:
        return state, np.int64(1)
    while True:
        state, z = splitmix64(state)
        u = h_n + uniform01(z) * (h_x1 - h_n)
        x = _h_integral_inverse(u, alpha)
        k = np.int64(x + 0.5)
        if k < 1:
            k = np.int64(1)
        elif k > n:
            k = np.int64(n)
        if k - x <= cutoff:
            return state, k
        if u >= _h_integral(k + 0.5, alpha) - _h(k, alpha):
            return state, k
    return state, np.int64(1)


def _zipf_bounds(n, alpha):
    """(h_x1, h_n, cutoff) for draws over [1, n]; plain-float helper."""
    h_x1 = float(_h_integral(1.5, alpha)) - 1.0
    h_n = float(_h_integral(n + 0.5, alpha))
    cutoff = float(_zipf_tail_cutoff(alpha))
    return h_x1, h_n, cutoff


# ---------------------------------------------------------------------------
# rank scrambling

def _scramble_params(record_count):
    # A keyed bijection on [0, 2^bits) with 2^bits >= record_count; walking
    # it until the image lands under record_count restricts it to a
    # bijection on [0, record_count).
    bits = max(1, (record_count - 1).bit_length())
    mask = (1 << bits) - 1
    mult1 = (0x9E3779B97F4A7C15 & mask) | 1
    mult2 = (0xBF58476D1CE4E5B9 & mask) | 1
    shift = max(1, bits // 2)
    return (np.uint64(mask), np.uint64(mult1), np.uint64(mult2),
            np.uint64(shift), np.uint64(record_count))


@njit(cache=True, nogil=True, inline="always")
def _scramble(rank, mask, mult1, mult2, shift, n):
    x = np.uint64(rank) - np.uint64(1)
    while True:
        x = (x * mult1) & mask
        x ^= x >> shift
        x = (x * mult2) & mask
        x ^= x >> shift
        if x < n:
            return x + np.uint64(1)
    return np.uint64(0)


@njit(cache=True, nogil=True)
def _scramble_fill(out, mask, mult1, mult2, shift, n):
    for i in range(out.shape[0]):
        out[i] = _scramble(np.uint64(i + 1), mask, mult1, mult2, shift, n)


def scramble_rank(rank, record_count):
    """Key for a popularity rank; a bijection on [1, record_count]."""
    assert 1 <= rank <= record_count
    mask, m1, m2, sh, n = _scramble_params(record_count)
    return int(_scramble(np.uint64(rank), mask, m1, m2, sh, n))


def scramble_all(record_count):
    """All keys in rank order; diagnostic helper for bijectivity checks."""
    out = np.empty(record_count, dtype=np.uint64)
    mask, m1, m2, sh, n = _scramble_params(record_count)
    _scramble_fill(out, mask, m1, m2, sh, n)
    return out


# ---------------------------------------------------------------------------
# bulk trace builders

@njit(cache=True, nogil=True)
def _fill_zipfian(out, state, n, alpha, h_x1, h_n, cutoff,
                  mask, mult1, mult2, shift, un):
    for i in range(out.shape[0]):
        state, r = _zipf_draw(state, n, alpha, h_x1, h_n, cutoff)
        out[i] = _scramble(np.uint64(r), mask, mult1, mult2, shift, un)
    return state


@njit(cache=True, nogil=True)
def _fill_latest(out, state, record_count, alpha, seen):
    ic = record_count
    h_x1 = _h_integral(1.5, alpha) - 1.0
    cutoff = _zipf_tail_cutoff(alpha)
    h_n = _h_integral(ic + 0.5, alpha)
    for i in range(out.shape[0]):
        state, off = _zipf_draw(state, ic, alpha, h_x1, h_n, cutoff)
        k = ic - off + 1
        out[i] = np.uint64(k)
        if seen[k] == 0:
            seen[k] = 1
            ic += 1
            h_n = _h_integral(ic + 0.5, alpha)
    return state, ic


@njit(cache=True, nogil=True)
def _fill_scan(out, state, n, alpha, h_x1, h_n, cutoff,
               mask, mult1, mult2, shift, un, max_len):
    i = 0
    while i < out.shape[0]:
        state, r = _zipf_draw(state, n, alpha, h_x1, h_n, cutoff)
        start = np.int64(_scramble(np.uint64(r), mask, mult1, mult2, shift, un))
        state, z = splitmix64(state)
        length = np.int64(1) + np.int64(z % np.uint64(max_len))
        end = start + length - 1
        if end > n:
            end = np.int64(n)
        k = start
        while k <= end and i < out.shape[0]:
            out[i] = np.uint64(k)
            i += 1
            k += 1
    return state


# ---------------------------------------------------------------------------
# one-at-a-time generators, for tests and small flows

class ZipfianGenerator:
    """Scrambled zipfian keys over [1, record_count]."""

    def __init__(self, spec, stream=0):
        self.spec = spec
        self._state = np.uint64(stream_seed(spec.seed, stream))
        self._n = spec.record_count
        self._bounds = _zipf_bounds(self._n, spec.alpha)
        self._sp = _scramble_params(self._n)

    def next_rank(self):
        # Re-wrap the state: the jitted draw hands it back as a plain int,
        # and feeding that in unwrapped would retype the kernel at int64.
        state, r = _zipf_draw(self._state, self._n, self.spec.alpha,
                              *self._bounds)
        self._state = np.uint64(state)
        return int(r)

    def next_key(self):
        return int(_scramble(np.uint64(self.next_rank()), *self._sp))


class LatestGenerator:
    """Recency-skewed keys over a frontier that grows with first touches."""

    def __init__(self, spec, stream=0):
        self.spec = spec
        self._state = np.uint64(stream_seed(spec.seed, stream))
        self.insert_count = spec.record_count
        self._seen = np.zeros(
            spec.record_count + spec.operation_count + 2, dtype=np.uint8)
        self._h_x1 = float(_h_integral(1.5, spec.alpha)) - 1.0
        self._cutoff = float(_zipf_tail_cutoff(spec.alpha))

    def next_key(self):
        h_n = float(_h_integral(self.insert_count + 0.5, self.spec.alpha))
        state, off = _zipf_draw(self._state, self.insert_count,
                                self.spec.alpha, self._h_x1, h_n,
                                self._cutoff)
        self._state = np.uint64(state)
        k = self.insert_count - int(off) + 1
        if self._seen[k] == 0:
            self._seen[k] = 1
            self.insert_count += 1
        return k


class ScanGenerator:
    """(start, length) scan descriptors; build_trace expands and clamps."""

    def __init__(self, spec, stream=0):
        self.spec = spec
        self._state = np.uint64(stream_seed(spec.seed, stream))
        self._n = spec.record_count
        self._bounds = _zipf_bounds(self._n, spec.alpha)
        self._sp = _scramble_params(self._n)

    def next_scan(self):
        state, r = _zipf_draw(self._state, self._n, self.spec.alpha,
                              *self._bounds)
        start = int(_scramble(np.uint64(r), *self._sp))
        state, z = splitmix64(np.uint64(state))
        self._state = np.uint64(state)
        length = 1 + int(np.uint64(z) % np.uint64(self.spec.max_scan_length))
        return start, length


def build_trace(spec, stream=0):
    """The full key sequence for one generator stream as uint64.

    Streams are decorrelated by seed mixing; thread t of a run conventionally
    consumes stream t. For the latest pattern each stream drifts its own
    insert frontier.
    """
    out = np.empty(spec.operation_count, dtype=np.uint64)
    if spec.operation_count == 0:
        return out
    state = np.uint64(stream_seed(spec.seed, stream))
    if spec.distribution == "zipfian":
        h_x1, h_n, cutoff = _zipf_bounds(spec.record_count, spec.alpha)
        _fill_zipfian(out, state, spec.record_count, spec.alpha,
                      h_x1, h_n, cutoff, *_scramble_params(spec.record_count))
    elif spec.distribution == "latest":
        seen = np.zeros(spec.record_count + spec.operation_count + 2,
                        dtype=np.uint8)
        _fill_latest(out, state, spec.record_count, spec.alpha, seen)
    else:
        h_x1, h_n, cutoff = _zipf_bounds(spec.record_count, spec.alpha)
        _fill_scan(out, state, spec.record_count, spec.alpha,
                   h_x1, h_n, cutoff, *_scramble_params(spec.record_count),
                   spec.max_scan_length)
    return out


# ---------------------------------------------------------------------------
# the request flow

def run_flow(cache, key, payload=None):
    """One get-or-insert request against a cache; True on hit.

    On a miss the key is inserted so the next request for it hits. When a
    payload pool is given, a miss writes the key's payload row and the hit
    path reads it back through the stored value, emulating a real lookup
    that must touch the object behind the cache entry.
    """
    res = cache.get(key)
    if res.hit:
        if payload is not None:
            _ = int(payload[res.value, -1])
        return True
    if payload is not None:
        slot = key % payload.shape[0]
        payload[slot, :] = key
        cache.put(key, slot)
    else:
        cache.put(key)
    return False


# ---------------------------------------------------------------------------
# trace files

def write_trace(path, keys, record_count, key_width=8, fmt="binary"):
    """Persist a key sequence; binary is the compact replayable form, text
    is one decimal key per line for eyeballing and interop."""
    keys = np.asarray(keys, dtype=np.uint64)
    if fmt == "text":
        with open(path, "w") as f:
            for k in keys:
                f.write(f"{int(k)}\n")
        return
    if fmt != "binary":
        raise ValueError(f"unknown trace format {fmt!r}")
    if key_width not in (4, 8):
        raise ValueError("key_width must be 4 or 8 bytes")
    if key_width == 4 and keys.size and int(keys.max()) >= (1 << 32) - 1:
        raise ValueError("keys do not fit 32-bit lanes")
    with open(path, "wb") as f:
        f.write(_TRACE_MAGIC)
        f.write(struct.pack("<IBQQ", _TRACE_VERSION, key_width,
                            record_count, keys.size))
        f.write(keys.astype("<u4" if key_width == 4 else "<u8").tobytes())


def read_trace(path):
    """Load a trace; returns (keys as uint64, meta dict).

    Binary files carry their own header; text files yield empty meta.
    """
    with open(path, "rb") as f:
        head = f.read(len(_TRACE_MAGIC))
        if head == _TRACE_MAGIC:
            version, key_width, record_count, count = struct.unpack(
                "<IBQQ", f.read(struct.calcsize("<IBQQ")))
            if version != _TRACE_VERSION:
                raise ValueError(f"unsupported trace version {version}")
            raw = f.read(count * key_width)
            if len(raw) != count * key_width:
                raise ValueError("trace file truncated")
            keys = np.frombuffer(
                raw, dtype="<u4" if key_width == 4 else "<u8").astype(np.uint64)
            meta = {"version": version, "key_width": key_width,
                    "record_count": record_count,
                    "operation_count": count}
            return keys, meta
    keys = np.loadtxt(path, dtype=np.uint64, ndmin=1)
    return keys, {}
