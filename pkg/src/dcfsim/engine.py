"""Deterministic discrete-event core.

Integer nanosecond clock, a binary-heap event queue with FIFO ordering for
equal timestamps, and seeded random streams that are independent per
(seed, stream id) pair so results never depend on host state or scheduling.
"""

from __future__ import annotations

import heapq
import random

US_NS = 1_000
MS_NS = 1_000_000
S_NS = 1_000_000_000

_MASK64 = (1 << 64) - 1


def s_to_ns(seconds: float) -> int:
    return int(round(seconds * S_NS))


def ns_to_s(ns: int) -> float:
    return ns / S_NS


class SimError(RuntimeError):
    """Scheduler misuse that would break causality."""


class Engine:
    """Event loop over (fire_at, insertion_seq, handler, arg) tuples.

    The insertion sequence makes dispatch a stable sort by time, so two
    events at the same tick always run in the order they were scheduled.
    Cancellation is lazy: cancelled sequence numbers are skipped on pop.
    """

    __slots__ = ("now", "_heap", "_seq", "_cancelled")

    def __init__(self) -> None:
        self.now = 0
        self._heap: list = []
        self._seq = 0
        self._cancelled: set[int] = set()

    def schedule(self, at_ns: int, fn, arg=None) -> int:
        if at_ns < self.now:
            raise SimError(f"event scheduled at {at_ns} ns, before current time {self.now} ns")
        seq = self._seq
        self._seq = seq + 1
        heapq.heappush(self._heap, (at_ns, seq, fn, arg))
        return seq

    def cancel(self, handle: int) -> None:
        self._cancelled.add(handle)

    def run_until(self, t_ns: int) -> None:
        heap = self._heap
        cancelled = self._cancelled
        while heap and heap[0][0] <= t_ns:
            at, seq, fn, arg = heapq.heappop(heap)
            if cancelled:
                if seq in cancelled:
                    cancelled.discard(seq)
                    continue
            self.now = at
            fn(arg)
        self.now = t_ns


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix64(a: int, b: int) -> int:
    """Stable 64-bit combine for deriving child seeds."""
    return _splitmix64(_splitmix64(a & _MASK64) ^ (b & _MASK64))


class RngStream:
    """Independent random stream identified by (seed, stream_id)."""

    __slots__ = ("_rng",)

    def __init__(self, seed: int, stream_id: int) -> None:
        self._rng = random.Random(mix64(seed, stream_id))

    def random(self) -> float:
        return self._rng.random()

    def randint(self, a: int, b: int) -> int:
        return self._rng.randint(a, b)

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def expovariate(self, lambd: float) -> float:
        return self._rng.expovariate(lambd)


def draw_exponential(stream: RngStream, mean: float, cap: float) -> float:
    """Exponential draw with the given mean, clipped to [0, cap]."""
    return min(stream.expovariate(1.0 / mean), cap)


def draw_exponential_count(stream: RngStream, mean: float, cap: int) -> int:
    """Exponential draw rounded to an integer count in [1, cap]."""
    n = int(round(stream.expovariate(1.0 / mean)))
    return min(max(1, n), cap)
