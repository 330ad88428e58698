"""Adaptive rate control.

Windowed success ratios smoothed by EWMA rank the rate ladder into a
best / second-best / most-reliable retry schedule; a small fraction of
first attempts probes rates faster than the current best so improvements
are discovered without burning airtime on rates already known to be slower.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import RngStream
from .phy import ACK_BYTES, RATE_INDEX, RATES, ack_rate_for, frame_airtime_ns


@dataclass(frozen=True)
class MinstrelParams:
    ewma_weight: float = 0.75
    update_interval_ns: int = 100_000_000
    p_probe: float = 0.1
    segment_caps: tuple = (4, 4, 4, 2)


# Ranking compares rates on a fixed reference frame. Small payloads pad to
# the same symbol count at adjacent rates (86 B takes 36 us at both 48 and
# 54 Mb/s), which would leave the ladder order to noise; the reference frame
# keeps per-rate transaction times strictly ordered.
RANK_REF_BYTES = 1200


@dataclass(slots=True)
class RateStats:
    ewma_prob: float = 0.0
    win_attempts: int = 0
    win_success: int = 0
    life_attempts: int = 0
    life_success: int = 0


class Minstrel:
    def __init__(self, params: MinstrelParams, psdu_bytes: int,
                 difs_ns: int = 34_000, sifs_ns: int = 16_000) -> None:
        self.params = params
        self.psdu_bytes = psdu_bytes
        # whole-transaction time per rate, ack at the matching mandatory rate
        def txn(nbytes, r):
            return (
                difs_ns
                + frame_airtime_ns(nbytes, r)
                + sifs_ns
                + frame_airtime_ns(ACK_BYTES, ack_rate_for(r))
            )

        self._txn_ns = {r: txn(psdu_bytes, r) for r in RATES}
        self._rank_txn_ns = {r: txn(RANK_REF_BYTES, r) for r in RATES}
        self.stats = {r: RateStats() for r in RATES}
        self.best_rate = RATES[0]
        self.second_rate = RATES[1]
        self.best_prob_rate = RATES[0]
        self.retry_schedule: list[int] = []
        self._rank()

    def throughput_estimate(self, rate_mbps: int, prob: float) -> float:
        """Expected goodput in Mb/s at the given success probability."""
        return prob * self.psdu_bytes * 8 / self._txn_ns[rate_mbps] * 1000.0

    def record_outcome(self, rate_mbps: int, ok: bool) -> None:
        st = self.stats[rate_mbps]
        st.win_attempts += 1
        st.life_attempts += 1
        if ok:
            st.win_success += 1
            st.life_success += 1

    def update_stats(self) -> None:
        w = self.params.ewma_weight
        for st in self.stats.values():
            if st.win_attempts:
                ratio = st.win_success / st.win_attempts
                if st.life_attempts == st.win_attempts:
                    # first window with data: seed the average instead of
                    # blending against the meaningless initial zero
                    st.ewma_prob = ratio
                else:
                    st.ewma_prob = (1.0 - w) * ratio + w * st.ewma_prob
                st.win_attempts = 0
                st.win_success = 0
        self._rank()

    def _rank(self) -> None:
        est = {
            r: self.stats[r].ewma_prob * RANK_REF_BYTES * 8 / self._rank_txn_ns[r]
            for r in RATES
        }
        order = sorted(
            RATES,
            key=lambda r: (est[r], self.stats[r].ewma_prob, RATE_INDEX[r]),
            reverse=True,
        )
        self.best_rate = order[0]
        self.second_rate = order[1]
        bp = max(
            RATES,
            key=lambda r: (self.stats[r].ewma_prob, est[r], RATE_INDEX[r]),
        )
        self.best_prob_rate = bp if self.stats[bp].ewma_prob > 0.0 else RATES[0]
        caps = self.params.segment_caps
        self.retry_schedule = (
            [self.best_rate] * caps[0]
            + [self.second_rate] * caps[1]
            + [self.best_prob_rate] * caps[2]
            + [RATES[0]] * caps[3]
        )

    def select_rate(self, attempt_index: int, rng: RngStream) -> int:
        if attempt_index <= 0:
            p = self.params.p_probe
            if p > 0.0 and rng.random() < p:
                faster = RATES[RATE_INDEX[self.best_rate] + 1 :]
                if faster:
                    return faster[rng.randrange(len(faster))]
                # already at the top: keep the runner-up rung fresh
                return RATES[RATE_INDEX[self.best_rate] - 1]
            return self.best_rate
        return self.retry_schedule[min(attempt_index, len(self.retry_schedule) - 1)]
