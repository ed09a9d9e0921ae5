"""Segmented sieve of Eratosthenes streaming primes in deterministic order.

The sieve walks fixed-size windows of the integer line, keeping only odd
residues in memory (one boolean per odd number).  Segments may be produced
by a pool of worker processes, but consumers always receive them in
ascending order, so every downstream computation is bit-identical for any
worker count and any segment size.
"""

from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_SEGMENT_SIZE = 1 << 18  # integers per window; ~128 KiB of odd flags
DEFAULT_MAX_SIEVE_BOUND = 1 << 40
MAX_BOUND_ENV = "MERTENS_MAX_SIEVE"

_TWO = np.array([2], dtype=np.int64)


class SieveLimitError(RuntimeError):
    """Raised when a requested bound exceeds the configured sieve maximum."""


def max_sieve_bound() -> int:
    """Current sieve cap: MERTENS_MAX_SIEVE if set, else 2^40."""
    raw = os.environ.get(MAX_BOUND_ENV)
    if raw is None:
        return DEFAULT_MAX_SIEVE_BOUND
    try:
        cap = int(float(raw))
    except ValueError:
        raise ValueError(f"{MAX_BOUND_ENV} must be numeric, got {raw!r}") from None
    if cap < 2:
        raise ValueError(f"{MAX_BOUND_ENV} must be at least 2, got {raw!r}")
    return cap


def _check_request(n: int, segment_size: int, workers: int) -> None:
    if n < 0:
        raise ValueError(f"sieve bound must be non-negative, got {n}")
    if segment_size < 1:
        raise ValueError(f"segment size must be positive, got {segment_size}")
    if workers < 1:
        raise ValueError(f"worker count must be positive, got {workers}")
    cap = max_sieve_bound()
    if n > cap:
        raise SieveLimitError(
            f"bound {n} exceeds the configured sieve maximum {cap}; "
            f"raise {MAX_BOUND_ENV} or use the extrapolation path"
        )


def base_odd_primes(limit: int) -> np.ndarray:
    """Odd primes <= limit via a dense odd-only sieve (int64 array)."""
    if limit < 3:
        return np.empty(0, dtype=np.int64)
    size = (limit - 1) // 2  # index i holds 3 + 2i
    mask = np.ones(size, dtype=bool)
    for i in range(size):
        p = 3 + 2 * i
        if p * p > limit:
            break
        if mask[i]:
            mask[(p * p - 3) // 2 :: p] = False
    return 3 + 2 * np.flatnonzero(mask).astype(np.int64)


def _segment_bounds(n: int, segment_size: int) -> list[tuple[int, int]]:
    # Contiguous [lo, hi) windows covering the integers [3, n + 1).
    bounds = []
    lo = 3
    while lo <= n:
        hi = min(lo + segment_size, n + 1)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def _odd_mask(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Prime flags for the odd numbers in [lo, hi), lowest first."""
    first = lo | 1
    count = (hi - first + 1) // 2
    mask = np.ones(max(count, 0), dtype=bool)
    if count <= 0:
        return mask
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = p * p
        if start < first:
            start = ((first + p - 1) // p) * p
            if start % 2 == 0:
                start += p
        if start < hi:
            mask[(start - first) // 2 :: p] = False
    return mask


# Worker-process state for the parallel path (populated by the initializer).
_POOL_BASE: np.ndarray | None = None


def _pool_init(base_primes: np.ndarray) -> None:
    global _POOL_BASE
    _POOL_BASE = base_primes


def _pool_sieve(bounds: tuple[int, int]) -> tuple[int, int, int, bytes]:
    lo, hi = bounds
    mask = _odd_mask(lo, hi, _POOL_BASE)
    return lo, hi, mask.shape[0], np.packbits(mask).tobytes()


def _iter_odd_masks(
    n: int, segment_size: int, workers: int
) -> Iterator[tuple[int, int, np.ndarray]]:
    bounds = _segment_bounds(n, segment_size)
    if not bounds:
        return
    base = base_odd_primes(math.isqrt(n))
    if workers <= 1 or len(bounds) == 1:
        for lo, hi in bounds:
            yield lo, hi, _odd_mask(lo, hi, base)
        return
    procs = min(workers, len(bounds))
    chunk = max(1, len(bounds) // (procs * 4))
    with multiprocessing.Pool(procs, initializer=_pool_init, initargs=(base,)) as pool:
        # imap preserves submission order: segments arrive ascending no matter
        # which worker finishes first.
        for lo, hi, count, packed in pool.imap(_pool_sieve, bounds, chunksize=chunk):
            buf = np.frombuffer(packed, dtype=np.uint8)
            yield lo, hi, np.unpackbits(buf, count=count).view(bool)


def iter_prime_arrays(
    n: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> Iterator[tuple[int, int, np.ndarray]]:
    """Yield (lo, hi, primes) with primes ascending and coverage contiguous.

    Each tuple asserts "every prime in [lo, hi) is in this array"; the union
    of coverages is [0, n + 1), so checkpoint consumers can finalize a point
    x as soon as a window with hi > x has been consumed.
    """
    _check_request(n, segment_size, workers)
    if n >= 2:
        yield 0, 3, _TWO
    for lo, hi, mask in _iter_odd_masks(n, segment_size, workers):
        first = lo | 1
        yield lo, hi, first + 2 * np.flatnonzero(mask).astype(np.int64)


def iter_checkpoint_events(
    arrays: Iterable[tuple[int, int, np.ndarray]],
    points: Sequence[int],
) -> Iterator[tuple[str, np.ndarray | int]]:
    """Interleave ("terms", subarray) and ("checkpoint", x) events in order.

    A checkpoint event for x is emitted exactly once, after every prime <= x
    has appeared in a terms event.  Points must be strictly ascending.
    """
    k = 0
    for lo, hi, arr in arrays:
        start = 0
        while k < len(points) and points[k] < hi:
            cut = int(np.searchsorted(arr, points[k], side="right"))
            if cut > start:
                yield "terms", arr[start:cut]
                start = cut
            yield "checkpoint", points[k]
            k += 1
        if start < len(arr):
            yield "terms", arr[start:]
    while k < len(points):  # bounds below the first window (n < 2)
        yield "checkpoint", points[k]
        k += 1


@dataclass
class PrimeStream:
    """Ascending stream of all primes <= upper_bound."""

    upper_bound: int
    segment_size: int = DEFAULT_SEGMENT_SIZE
    workers: int = 1

    def __post_init__(self) -> None:
        _check_request(self.upper_bound, self.segment_size, self.workers)

    def arrays(self) -> Iterator[tuple[int, int, np.ndarray]]:
        return iter_prime_arrays(self.upper_bound, self.segment_size, self.workers)

    def __iter__(self) -> Iterator[int]:
        for _, _, arr in self.arrays():
            yield from arr.tolist()


@dataclass
class PiCheckpoint:
    x: int
    pi_x: int


def primes_up_to(
    n: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> PrimeStream:
    """All primes <= n, ascending; empty when n < 2."""
    return PrimeStream(n, segment_size, workers)


def primes_array(n: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """Materialized int64 array of all primes <= n (small n convenience)."""
    chunks = [arr for _, _, arr in iter_prime_arrays(n, segment_size)]
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


def _validate_points(points: Sequence[int]) -> list[int]:
    pts = [int(x) for x in points]
    if not pts:
        raise ValueError("checkpoint list must be non-empty")
    for a, b in zip(pts, pts[1:]):
        if b <= a:
            raise ValueError(f"checkpoints must be strictly ascending, got {a} before {b}")
    if pts[0] < 0:
        raise ValueError(f"checkpoints must be non-negative, got {pts[0]}")
    return pts


def pi_at(
    points: Sequence[int],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> list[PiCheckpoint]:
    """Exact prime counts pi(x) at each point, from a single sieve pass."""
    pts = _validate_points(points)
    arrays = iter_prime_arrays(pts[-1], segment_size, workers)
    count = 0
    rows: list[PiCheckpoint] = []
    for kind, payload in iter_checkpoint_events(arrays, pts):
        if kind == "terms":
            count += len(payload)
        else:
            rows.append(PiCheckpoint(payload, count))
    return rows
