"""Heap-driven enumeration of close pairs of perfect powers below 2^C.

One entry per exponent lives in a min-heap; the minimum is repeatedly
popped, compared against the next two smallest entries (one more than
strictly necessary, as a safety margin for the completeness argument),
its base incremented, and its power recomputed.  Bases run over all
integers >= 2, not just primes; primality of hit bases is classified
downstream.  A brute-force oracle (materialize and sort every power)
provides an independent check at small bounds.
"""

import heapq
import json
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .carries import iroot
from .egyptian import is_seven_rough
from .factoring import small_primes

__all__ = [
    "PowerEntry",
    "Hit",
    "SearchConfig",
    "SearchResult",
    "CheckpointError",
    "close_pair",
    "exponent_set",
    "heap_search",
    "brute_search",
    "expected_increments",
    "hit_from_dict",
    "load_checkpoint",
    "CHECKPOINT_SCHEMA",
]

CHECKPOINT_SCHEMA = "ckpt-v1"


@dataclass(frozen=True)
class PowerEntry:
    base: int
    exponent: int
    value: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if self.exponent < 1:
            raise ValueError("exponent must be positive")
        if self.value != self.base ** self.exponent:
            raise ValueError("cached value does not match base^exponent")

    @classmethod
    def make(cls, base: int, exponent: int) -> "PowerEntry":
        return cls(base, exponent, base ** exponent)

    def __str__(self) -> str:
        return f"{self.base}^{self.exponent}"


@dataclass(frozen=True)
class Hit:
    larger: PowerEntry
    smaller: PowerEntry

    def __post_init__(self):
        if not self.larger.value > self.smaller.value:
            raise ValueError("larger.value must exceed smaller.value")
        if self.diff ** 2 >= self.larger.value:
            raise ValueError("pair is not close: diff^2 >= larger value")

    @property
    def diff(self) -> int:
        return self.larger.value - self.smaller.value

    def validate(self) -> None:
        """Re-check every invariant from scratch (used on emitted hits)."""
        assert self.larger.value == self.larger.base ** self.larger.exponent
        assert self.smaller.value == self.smaller.base ** self.smaller.exponent
        assert self.diff >= 1
        assert self.diff ** 2 < self.larger.value


def _parse_filter(pair_filter: str) -> Tuple[str, Optional[int]]:
    if pair_filter in ("all", "at-least-one-rough", "both-rough"):
        return pair_filter, None
    if pair_filter.startswith("at-least-one-exponent-ge:"):
        k = int(pair_filter.split(":", 1)[1])
        if k < 1:
            raise ValueError(f"bad filter threshold in {pair_filter!r}")
        return "at-least-one-exponent-ge", k
    raise ValueError(f"unknown pair filter {pair_filter!r}")


@dataclass(frozen=True)
class SearchConfig:
    exponents: Tuple[int, ...]
    bound_bits: int
    pair_filter: str = "all"

    def __post_init__(self):
        if not self.exponents:
            raise ValueError("exponent set must be non-empty")
        if any(e < 3 for e in self.exponents):
            raise ValueError("exponents must all be >= 3")
        if len(set(self.exponents)) != len(self.exponents):
            raise ValueError("exponents must be distinct")
        if tuple(sorted(self.exponents)) != self.exponents:
            raise ValueError("exponents must be sorted ascending")
        if self.bound_bits < 1:
            raise ValueError("bound_bits must be positive")
        _parse_filter(self.pair_filter)

    @classmethod
    def make(cls, exponents, bound_bits: int, pair_filter: str = "all") -> "SearchConfig":
        return cls(tuple(sorted(exponents)), bound_bits, pair_filter)

    @property
    def bound(self) -> int:
        return 1 << self.bound_bits

    def filter_passes(self, e1: int, e2: int) -> bool:
        kind, k = _parse_filter(self.pair_filter)
        if kind == "all":
            return True
        if kind == "at-least-one-rough":
            return is_seven_rough(e1) or is_seven_rough(e2)
        if kind == "both-rough":
            return is_seven_rough(e1) and is_seven_rough(e2)
        return max(e1, e2) >= k


@dataclass
class SearchResult:
    config: SearchConfig
    hits: List[Hit]
    increments: int
    finished: bool


class CheckpointError(RuntimeError):
    pass


def close_pair(x: int, y: int) -> bool:
    """True iff the two values differ, and the gap squared stays below the
    larger value (exact form of gap < sqrt(larger))."""
    d = abs(x - y)
    return d >= 1 and d * d < max(x, y)


def exponent_set(bound_bits: int, min_prime: int = 3) -> Tuple[int, ...]:
    """All primes p with min_prime <= p <= bound_bits, ascending.

    The top exponent contributes no search work (2^bound_bits is already
    out of range) but is kept for a faithful 'primes up to C' policy.
    """
    if bound_bits < 1:
        raise ValueError("bound_bits must be positive")
    primes = small_primes(max(bound_bits + 1, 8))
    return tuple(p for p in primes if min_prime <= p <= bound_bits)


def _sort_hits(hits: List[Hit]) -> List[Hit]:
    return sorted(
        hits,
        key=lambda h: (h.larger.value, h.smaller.value, h.larger.exponent),
    )


def _hit_to_dict(h: Hit) -> dict:
    return {
        "larger": {"base": h.larger.base, "exponent": h.larger.exponent, "value": h.larger.value},
        "smaller": {"base": h.smaller.base, "exponent": h.smaller.exponent, "value": h.smaller.value},
        "diff": h.diff,
    }


def hit_from_dict(d: dict) -> Hit:
    hit = Hit(
        PowerEntry(d["larger"]["base"], d["larger"]["exponent"], d["larger"]["value"]),
        PowerEntry(d["smaller"]["base"], d["smaller"]["exponent"], d["smaller"]["value"]),
    )
    if hit.diff != d["diff"]:
        raise ValueError("hit diff does not match recorded value")
    return hit


def _write_checkpoint(path: str, config: SearchConfig, bases: Dict[int, int],
                      increments: int, hits: List[Hit]) -> None:
    doc = {
        "schema": CHECKPOINT_SCHEMA,
        "config": {
            "exponents": list(config.exponents),
            "bound_bits": config.bound_bits,
            "pair_filter": config.pair_filter,
        },
        "bases": {str(p): b for p, b in sorted(bases.items())},
        "increments": increments,
        "hits": [_hit_to_dict(h) for h in hits],
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    os.replace(tmp, path)


def load_checkpoint(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != CHECKPOINT_SCHEMA:
        raise CheckpointError(f"unknown checkpoint schema {doc.get('schema')!r}")
    return doc


def heap_search(
    config: SearchConfig,
    checkpoint_path: Optional[str] = None,
    checkpoint_every: int = 1 << 24,
    checkpoint_seconds: float = 60.0,
    max_increments: Optional[int] = None,
    debug_validate: bool = False,
) -> SearchResult:
    """Find every close pair of in-range powers with distinct exponents.

    Deterministic: heap ties break on the smaller exponent, and the final
    hit list is sorted ascending by larger value.  If a checkpoint file
    exists at checkpoint_path, the run resumes from it (the stored config
    must match); with max_increments set, the run stops early after that
    many base increments, persisting a checkpoint when a path is given.
    """
    bound = config.bound
    hits: List[Hit] = []
    increments = 0

    if checkpoint_path and os.path.exists(checkpoint_path):
        doc = load_checkpoint(checkpoint_path)
        stored = SearchConfig.make(
            doc["config"]["exponents"], doc["config"]["bound_bits"],
            doc["config"]["pair_filter"],
        )
        if stored != config:
            raise CheckpointError(
                f"checkpoint config {stored} does not match requested {config}"
            )
        bases = {int(p): b for p, b in doc["bases"].items()}
        increments = doc["increments"]
        hits = [hit_from_dict(d) for d in doc["hits"]]
    else:
        bases = {p: 2 for p in config.exponents}

    heap = [
        (b ** p, p, b)
        for p, b in bases.items()
        if b ** p < bound
    ]
    heapq.heapify(heap)

    run_increments = 0
    last_ckpt = time.monotonic()
    while heap:
        if max_increments is not None and run_increments >= max_increments:
            if checkpoint_path:
                _write_checkpoint(checkpoint_path, config, bases, increments, hits)
            return SearchResult(config, _sort_hits(hits), increments, finished=False)
        if debug_validate:
            for i in range(1, len(heap)):
                assert heap[(i - 1) // 2] <= heap[i], "heap property violated"
        v, p, b = heapq.heappop(heap)
        if heap:
            runners_up = [heap[0]]
            if len(heap) > 2:
                runners_up.append(min(heap[1], heap[2]))
            elif len(heap) == 2:
                runners_up.append(heap[1])
            for v2, p2, b2 in runners_up:
                d = v2 - v
                if d >= 1 and d * d < v2 and config.filter_passes(p, p2):
                    hits.append(Hit(PowerEntry(b2, p2, v2), PowerEntry(b, p, v)))
        b += 1
        increments += 1
        run_increments += 1
        bases[p] = b
        nv = b ** p
        if nv < bound:
            heapq.heappush(heap, (nv, p, b))
        if checkpoint_path and (
            run_increments % checkpoint_every == 0
            or time.monotonic() - last_ckpt >= checkpoint_seconds
        ):
            _write_checkpoint(checkpoint_path, config, bases, increments, hits)
            last_ckpt = time.monotonic()

    hits = _sort_hits(hits)
    for h in hits:
        h.validate()
    if checkpoint_path:
        _write_checkpoint(checkpoint_path, config, bases, increments, hits)
    return SearchResult(config, hits, increments, finished=True)


def expected_increments(config: SearchConfig) -> int:
    """Base-increment count the engine must perform: the work accounting
    identity sum_p (iroot(2^C - 1, p) - 1), zero-clamped per exponent."""
    total = 0
    for p in config.exponents:
        total += max(iroot(config.bound - 1, p) - 1, 0)
    return total


def brute_search(config: SearchConfig) -> SearchResult:
    """Independent oracle: materialize every in-range power, sort, and test
    each window of nearby values.  Guarded to small bounds by design."""
    if config.bound_bits > 40:
        raise ValueError("brute_search is limited to bound_bits <= 40")
    bound = config.bound
    entries = []
    for p in config.exponents:
        b = 2
        while b ** p < bound:
            entries.append((b ** p, p, b))
            b += 1
    entries.sort()
    hits: List[Hit] = []
    for i, (v, p, b) in enumerate(entries):
        for j in range(i + 1, len(entries)):
            v2, p2, b2 = entries[j]
            d = v2 - v
            if d * d >= v2 and d * d >= bound:
                break
            if p2 != p and d >= 1 and d * d < v2 and config.filter_passes(p, p2):
                hits.append(Hit(PowerEntry(b2, p2, v2), PowerEntry(b, p, v)))
    return SearchResult(config, _sort_hits(hits), increments=0, finished=True)
