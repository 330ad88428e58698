"""Contention MAC.

CSMA/CA with binary exponential backoff, immediate acks after SIFS at the
receiver, retry with a capped window, fire-and-forget broadcast beacons at
the access point, and timeout deferral while a reception is still in
progress (the pending frame may turn out to be the awaited ack).
"""

from __future__ import annotations

from collections import deque

from .engine import Engine, RngStream
from .metrics import PacketRecord, TxAttempt
from .minstrel import Minstrel
from .phy import ACK_BYTES, BROADCAST, Kind, Medium, Psdu, RATES, ack_rate_for


class MacParams:
    __slots__ = (
        "sifs_ns", "slot_ns", "difs_ns", "cw_min", "cw_max", "retry_limit",
        "ack_timeout_ns", "beacon_interval_ns", "beacon_bytes",
    )

    def __init__(self, sifs_ns=16_000, slot_ns=9_000, difs_ns=None, cw_min=15,
                 cw_max=1023, retry_limit=13, ack_timeout_ns=45_000,
                 beacon_interval_ns=102_400_000, beacon_bytes=100):
        self.sifs_ns = sifs_ns
        self.slot_ns = slot_ns
        self.difs_ns = difs_ns if difs_ns is not None else sifs_ns + 2 * slot_ns
        self.cw_min = cw_min
        self.cw_max = cw_max
        self.retry_limit = retry_limit
        self.ack_timeout_ns = ack_timeout_ns
        self.beacon_interval_ns = beacon_interval_ns
        self.beacon_bytes = beacon_bytes

    def eifs_ns(self) -> int:
        """Extended deferral after a failed decode: SIFS + lowest-rate ack + DIFS."""
        from .phy import frame_airtime_ns

        return self.sifs_ns + frame_airtime_ns(ACK_BYTES, RATES[0]) + self.difs_ns


def next_cw(cw: int, cw_max: int) -> int:
    return min(2 * (cw + 1) - 1, cw_max)


class _Packet:
    __slots__ = ("psdu", "gen_ns", "attempts", "rate")

    def __init__(self, psdu: Psdu, gen_ns: int):
        self.psdu = psdu
        self.gen_ns = gen_ns
        self.attempts: list[TxAttempt] = []
        self.rate = 0


class Dcf:
    """Per-node channel access state machine.

    Medium hooks drive it: busy edges freeze the countdown (whole slots
    already waited are credited), idle edges restart it after the deferral
    the medium reports, decode decisions resolve ack waits, and a grant
    event fires when the countdown expires.
    """

    def __init__(self, engine: Engine, medium: Medium, node_id: int,
                 params: MacParams, minstrel: Minstrel,
                 rng_backoff: RngStream, rng_probe: RngStream,
                 keep_records: bool = False, is_ap: bool = False,
                 queue_cap: int | None = None) -> None:
        self.engine = engine
        self.medium = medium
        self.me = node_id
        self.params = params
        self.minstrel = minstrel
        self.rng_backoff = rng_backoff
        self.rng_probe = rng_probe
        self.keep_records = keep_records
        self.is_ap = is_ap
        self.queue_cap = queue_cap
        self.queue: deque = deque()
        self.queue_drops = 0
        self.records: list[PacketRecord] = []
        self.cw = params.cw_min
        self.cur: _Packet | None = None
        self.backoff_slots: int | None = None
        self.grant_h: int | None = None
        self.countdown_from = 0
        self.medium_busy = False
        self.idle_since = 0
        self.cur_ifs = params.difs_ns
        self.txing = False
        self.awaiting_ack = False
        self.ack_h: int | None = None
        self.waiting_lock = False
        self._beacon_seq = 0
        if is_ap:
            engine.schedule(engine.now, self._beacon_tick)
        engine.schedule(
            engine.now + minstrel.params.update_interval_ns, self._stats_tick
        )

    # -------------------------------------------------------------- queueing

    def enqueue(self, psdu: Psdu, now: int | None = None) -> None:
        if self.queue_cap is not None and len(self.queue) >= self.queue_cap:
            self.queue_drops += 1
            return
        self.queue.append((psdu, self.engine.now if now is None else now))
        if self.cur is None:
            self.cur = _Packet(*self.queue.popleft())
            if self.medium_busy or self.txing:
                if self.backoff_slots is None:
                    self.backoff_slots = self.rng_backoff.randint(0, self.cw)
            else:
                self._ensure_grant()

    # ---------------------------------------------------------- medium hooks

    def on_medium_busy(self, now: int) -> None:
        if self.medium_busy:
            return
        self.medium_busy = True
        if self.grant_h is not None:
            self.engine.cancel(self.grant_h)
            self.grant_h = None
            if self.backoff_slots is not None:
                if now > self.countdown_from:
                    consumed = (now - self.countdown_from) // self.params.slot_ns
                    self.backoff_slots = max(0, self.backoff_slots - consumed)
            elif self.cur is not None and not self.awaiting_ack:
                # initial sensing interrupted; continue with a drawn backoff
                self.backoff_slots = self.rng_backoff.randint(0, self.cw)

    def on_medium_idle(self, now: int, ifs_ns: int) -> None:
        self.medium_busy = False
        self.idle_since = now
        self.cur_ifs = ifs_ns
        self._ensure_grant()

    def on_own_tx_end(self) -> None:
        self.txing = False
        if self.cur is not None and not self.awaiting_ack and self.cur.attempts:
            # broadcast frames complete at end of airtime, no ack expected
            if self.cur.psdu.dst == BROADCAST:
                self._finish_service()

    def on_rx_decision(self, ok: bool, psdu: Psdu, rate_mbps: int, src: int) -> None:
        if ok and psdu.dst == self.me:
            if psdu.kind == Kind.ACK:
                if (
                    self.awaiting_ack
                    and self.cur is not None
                    and psdu.seqno == self.cur.psdu.seqno
                ):
                    self._ack_success()
                    return
            elif psdu.kind == Kind.DATA:
                self.engine.schedule(
                    self.engine.now + self.params.sifs_ns,
                    self._tx_ack,
                    (psdu, rate_mbps, src),
                )
        if self.waiting_lock and self.awaiting_ack:
            # the reception that deferred the timeout was not our ack
            self.waiting_lock = False
            self._attempt_failed()

    # ------------------------------------------------------------- internals

    def _ensure_grant(self) -> None:
        if (
            self.txing
            or self.awaiting_ack
            or self.medium_busy
            or self.grant_h is not None
        ):
            return
        if self.cur is None and self.backoff_slots is None:
            return
        now = self.engine.now
        if self.backoff_slots is None:
            # fresh arrival on an idle medium: full DIFS from the arrival,
            # longer if the current idle stretch imposes a longer deferral
            anchor = max(now + self.params.difs_ns, self.idle_since + self.cur_ifs)
            slots = 0
        else:
            anchor = max(now, self.idle_since + self.cur_ifs)
            slots = self.backoff_slots
        self.countdown_from = anchor
        self.grant_h = self.engine.schedule(
            anchor + slots * self.params.slot_ns, self._grant
        )

    def _grant(self, _) -> None:
        self.grant_h = None
        if self.txing or self.awaiting_ack or self.medium_busy:
            return
        self.backoff_slots = None
        if self.cur is None:
            if not self.queue:
                return  # post-tx backoff expired with nothing to send
            self.cur = _Packet(*self.queue.popleft())
        self._start_attempt()

    def _start_attempt(self) -> None:
        cur = self.cur
        psdu = cur.psdu
        if psdu.kind == Kind.DATA and psdu.dst != BROADCAST:
            rate = self.minstrel.select_rate(len(cur.attempts), self.rng_probe)
        else:
            rate = RATES[0]
        cur.rate = rate
        air = self.medium.airtime_ns(psdu.size_bytes, rate)
        now = self.engine.now
        cur.attempts.append(TxAttempt(rate, now, air, False, self.cw))
        self.txing = True
        self.medium_busy = True
        end = self.medium.begin_tx(self.me, psdu, rate)
        if psdu.dst != BROADCAST:
            self.awaiting_ack = True
            self.ack_h = self.engine.schedule(
                end + self.params.ack_timeout_ns, self._ack_timeout
            )

    def _ack_timeout(self, _) -> None:
        self.ack_h = None
        if not self.awaiting_ack:
            return
        if self.medium.lock_active(self.me):
            # a frame is being received; it may be our ack, decide then
            self.waiting_lock = True
            return
        self._attempt_failed()

    def _ack_success(self) -> None:
        self.awaiting_ack = False
        self.waiting_lock = False
        if self.ack_h is not None:
            self.engine.cancel(self.ack_h)
            self.ack_h = None
        cur = self.cur
        cur.attempts[-1].ok = True
        self.minstrel.record_outcome(cur.rate, True)
        if self.keep_records:
            self.records.append(
                PacketRecord(cur.psdu.seqno, cur.gen_ns, True, self.engine.now, cur.attempts)
            )
        self.cw = self.params.cw_min
        self._finish_service()

    def _attempt_failed(self) -> None:
        self.awaiting_ack = False
        self.waiting_lock = False
        cur = self.cur
        self.minstrel.record_outcome(cur.rate, False)
        if len(cur.attempts) > self.params.retry_limit:
            if self.keep_records:
                self.records.append(
                    PacketRecord(cur.psdu.seqno, cur.gen_ns, False, None, cur.attempts)
                )
            self.cw = self.params.cw_min
            self._finish_service()
        else:
            self.cw = next_cw(self.cw, self.params.cw_max)
            self.backoff_slots = self.rng_backoff.randint(0, self.cw)
            self._ensure_grant()

    def _finish_service(self) -> None:
        # post-transmission backoff runs even with an empty queue
        self.backoff_slots = self.rng_backoff.randint(0, self.cw)
        self.cur = None
        if self.queue:
            self.cur = _Packet(*self.queue.popleft())
        self._ensure_grant()

    def _tx_ack(self, arg) -> None:
        data_psdu, data_rate, dst = arg
        if self.txing:
            raise RuntimeError("ack response scheduled while transmitting")
        if self.grant_h is not None:
            self.engine.cancel(self.grant_h)
            self.grant_h = None
        ack = Psdu(ACK_BYTES, self.me, dst, Kind.ACK, data_psdu.seqno)
        self.txing = True
        self.medium_busy = True
        self.medium.begin_tx(self.me, ack, ack_rate_for(data_rate))

    def _beacon_tick(self, _) -> None:
        self.enqueue(Psdu(self.params.beacon_bytes, self.me, BROADCAST, Kind.BEACON, self._beacon_seq))
        self._beacon_seq += 1
        self.engine.schedule(self.engine.now + self.params.beacon_interval_ns, self._beacon_tick)

    def _stats_tick(self, _) -> None:
        self.minstrel.update_stats()
        self.engine.schedule(
            self.engine.now + self.minstrel.params.update_interval_ns, self._stats_tick
        )
