"""Application traffic sources feeding PSDUs into a MAC queue."""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Engine, RngStream, draw_exponential, draw_exponential_count, s_to_ns
from .phy import Kind, Psdu

# headers, addressing, and FCS added around the application payload
PSDU_OVERHEAD_BYTES = 64


@dataclass(frozen=True)
class PeriodicProfile:
    period_s: float = 0.5
    payload_bytes: int = 22

    @property
    def psdu_bytes(self) -> int:
        return self.payload_bytes + PSDU_OVERHEAD_BYTES


@dataclass(frozen=True)
class BurstyProfile:
    payload_bytes: int = 1472
    spacing_s: float = 500e-6
    burst_mean: float = 100.0
    burst_cap: int = 500
    idle_mean_s: float = 0.25
    idle_cap_s: float = 10.0

    @property
    def psdu_bytes(self) -> int:
        return self.payload_bytes + PSDU_OVERHEAD_BYTES


class PeriodicSource:
    """Fixed-interval unicast stream; generates strictly before end_ns."""

    def __init__(self, engine: Engine, sink, profile: PeriodicProfile,
                 start_ns: int, end_ns: int, src: int, dst: int) -> None:
        self._engine = engine
        self._sink = sink
        self._profile = profile
        self._period_ns = s_to_ns(profile.period_s)
        self._end_ns = end_ns
        self._src = src
        self._dst = dst
        self._seq = 0
        if start_ns < end_ns:
            engine.schedule(start_ns, self._fire)

    def _fire(self, _) -> None:
        now = self._engine.now
        psdu = Psdu(self._profile.psdu_bytes, self._src, self._dst, Kind.DATA, self._seq)
        self._seq += 1
        self._sink(psdu, now)
        nxt = now + self._period_ns
        if nxt < self._end_ns:
            self._engine.schedule(nxt, self._fire)


class BurstySource:
    """Bursts of back-to-back frames separated by exponential idle gaps.

    Burst sizes are exponential draws rounded into [1, cap]; frames within a
    burst are offered at a fixed spacing; the gap to the next burst starts
    at the last frame of the current one.
    """

    def __init__(self, engine: Engine, sink, profile: BurstyProfile,
                 start_ns: int, end_ns: int, src: int, dst: int, rng: RngStream) -> None:
        self._engine = engine
        self._sink = sink
        self._profile = profile
        self._spacing_ns = s_to_ns(profile.spacing_s)
        self._end_ns = end_ns
        self._src = src
        self._dst = dst
        self._rng = rng
        self._seq = 0
        self._remaining = 0
        if start_ns < end_ns:
            engine.schedule(start_ns, self._burst)

    def _burst(self, _) -> None:
        if self._engine.now >= self._end_ns:
            return
        self._remaining = draw_exponential_count(
            self._rng, self._profile.burst_mean, self._profile.burst_cap
        )
        self._emit(None)

    def _emit(self, _) -> None:
        now = self._engine.now
        if now >= self._end_ns:
            return
        psdu = Psdu(self._profile.psdu_bytes, self._src, self._dst, Kind.DATA, self._seq)
        self._seq += 1
        self._sink(psdu, now)
        self._remaining -= 1
        if self._remaining > 0:
            self._engine.schedule(now + self._spacing_ns, self._emit)
        else:
            gap_s = draw_exponential(self._rng, self._profile.idle_mean_s, self._profile.idle_cap_s)
            self._engine.schedule(now + max(1, s_to_ns(gap_s)), self._burst)
