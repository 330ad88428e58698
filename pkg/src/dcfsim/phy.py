"""Radio layer.

Log-distance propagation, OFDM frame airtime, two frame error models
(deterministic SNR thresholds and an analytic BER/union-bound model), and
the shared medium that tracks per-receiver preamble locks, busy counts,
and chunked SINR over interference boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .engine import Engine, RngStream, SimError

RATES = (6, 9, 12, 18, 24, 36, 48, 54)
RATE_INDEX = {r: i for i, r in enumerate(RATES)}
DATA_BITS_PER_SYMBOL = {6: 24, 9: 36, 12: 48, 18: 72, 24: 96, 36: 144, 48: 192, 54: 216}
BASIC_RATES = (6, 12, 24)

BROADCAST = -1
ACK_BYTES = 14

PREAMBLE_NS = 20_000
SYMBOL_NS = 4_000
SERVICE_BITS = 16
TAIL_BITS = 6

# conservative horizon after which an old transmission cannot overlap any
# frame still awaiting a decode decision (max airtime is ~2.1 ms)
_PRUNE_MARGIN_NS = 16_000_000


class Kind(Enum):
    DATA = 1
    ACK = 2
    BEACON = 3


@dataclass(frozen=True)
class Psdu:
    size_bytes: int
    src: int
    dst: int
    kind: Kind
    seqno: int = 0


@dataclass(frozen=True)
class PathLossParams:
    l0_db: float = 46.6777
    d0_m: float = 1.0
    exponent: float = 3.0


@dataclass(frozen=True)
class RadioParams:
    tx_power_dbm: float = 16.0206
    preamble_detect_dbm: float = -82.0
    energy_detect_dbm: float = -62.0
    noise_figure_db: float = 7.0
    bandwidth_hz: float = 20e6
    prop_speed_mps: float = 2.99792e8


def path_loss_db(d_m: float, plp: PathLossParams) -> float:
    if d_m <= 0.0:
        raise ValueError(f"distance must be positive, got {d_m}")
    d = max(d_m, plp.d0_m)
    return plp.l0_db + 10.0 * plp.exponent * math.log10(d / plp.d0_m)


def rx_power_dbm(d_m: float, plp: PathLossParams, radio: RadioParams) -> float:
    return radio.tx_power_dbm - path_loss_db(d_m, plp)


def noise_floor_dbm(radio: RadioParams) -> float:
    return -174.0 + 10.0 * math.log10(radio.bandwidth_hz) + radio.noise_figure_db


def snr_db_at(d_m: float, plp: PathLossParams, radio: RadioParams) -> float:
    return rx_power_dbm(d_m, plp, radio) - noise_floor_dbm(radio)


def max_range_m(plp: PathLossParams, radio: RadioParams) -> float:
    """Largest distance at which a preamble is still detectable."""
    budget_db = radio.tx_power_dbm - radio.preamble_detect_dbm - plp.l0_db
    return plp.d0_m * 10.0 ** (budget_db / (10.0 * plp.exponent))


def propagation_delay_ns(d_m: float, radio: RadioParams) -> int:
    return int(round(d_m / radio.prop_speed_mps * 1e9))


def frame_airtime_ns(size_bytes: int, rate_mbps: int) -> int:
    bits = SERVICE_BITS + 8 * size_bytes + TAIL_BITS
    bps = DATA_BITS_PER_SYMBOL[rate_mbps]
    return PREAMBLE_NS + SYMBOL_NS * ((bits + bps - 1) // bps)


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def ack_rate_for(data_rate: int, basic_rates=BASIC_RATES) -> int:
    """Highest mandatory rate not above the data rate."""
    eligible = [b for b in basic_rates if b <= data_rate]
    return max(eligible) if eligible else min(basic_rates)


# ---------------------------------------------------------------------------
# frame error models

DEFAULT_ONSETS_M = {54: 28.0, 48: 31.0, 36: 47.0, 24: 48.5, 18: 49.0, 12: 52.0, 9: 55.0, 6: 60.0}


def default_thresholds(plp: PathLossParams, radio: RadioParams) -> dict[int, float]:
    """SNR floor per rate, anchored at the distance where the rate stops working."""
    return {r: snr_db_at(d, plp, radio) for r, d in DEFAULT_ONSETS_M.items()}


class ThresholdErrorModel:
    """All-or-nothing decode: a rate works iff SINR meets its floor."""

    __slots__ = ("thresholds",)

    def __init__(self, thresholds: dict[int, float]) -> None:
        self.thresholds = dict(thresholds)

    def per(self, snr_db: float, rate_mbps: int, bits: float) -> float:
        return 0.0 if snr_db >= self.thresholds[rate_mbps] else 1.0


def _ber_bpsk(snr: float) -> float:
    return 0.5 * math.erfc(math.sqrt(snr))


def _ber_qpsk(snr: float) -> float:
    return 0.5 * math.erfc(math.sqrt(snr / 2.0))


def _ber_qam16(snr: float) -> float:
    return 0.375 * math.erfc(math.sqrt(snr / 10.0))


def _ber_qam64(snr: float) -> float:
    return (7.0 / 24.0) * math.erfc(math.sqrt(snr / 42.0))


# K=7 convolutional code distance spectra: (prefactor, first distance, step,
# weights); the union bound sums weight * D^distance over the spectrum
_SPECTRUM_HALF = (0.5, 10, 2, (36, 211, 1404, 11633, 77433, 502690, 3322763, 21292910, 134365911, 843425871))
_SPECTRUM_TWO_THIRDS = (0.25, 6, 1, (3, 70, 285, 1276, 6160, 27128, 117019, 498860, 2103891, 8784123))
_SPECTRUM_THREE_QUARTERS = (1.0 / 6.0, 5, 1, (42, 201, 1492, 10469, 62935, 379644, 2253373, 13073811, 75152755, 428005675))

_RATE_CODING = {
    6: (_ber_bpsk, _SPECTRUM_HALF),
    9: (_ber_bpsk, _SPECTRUM_THREE_QUARTERS),
    12: (_ber_qpsk, _SPECTRUM_HALF),
    18: (_ber_qpsk, _SPECTRUM_THREE_QUARTERS),
    24: (_ber_qam16, _SPECTRUM_HALF),
    36: (_ber_qam16, _SPECTRUM_THREE_QUARTERS),
    48: (_ber_qam64, _SPECTRUM_TWO_THIRDS),
    54: (_ber_qam64, _SPECTRUM_THREE_QUARTERS),
}


class NistErrorModel:
    """Analytic model: modulation BER through a convolutional union bound.

    The decoded bit error rate is clamped to be non-decreasing across the
    rate ladder so adjacent coding/modulation pairs never cross.
    """

    __slots__ = ()

    @staticmethod
    def _decoded_ber(snr: float, rate_mbps: int) -> float:
        ber_fn, (prefactor, first, step, weights) = _RATE_CODING[rate_mbps]
        p = ber_fn(snr)
        if p <= 0.0:
            return 0.0
        if p >= 0.5:
            return 1.0
        d = math.sqrt(4.0 * p * (1.0 - p))
        total = 0.0
        dk = d**first
        mult = d**step
        for w in weights:
            total += w * dk
            dk *= mult
        return min(1.0, prefactor * total)

    def per(self, snr_db: float, rate_mbps: int, bits: float) -> float:
        snr = 10.0 ** (snr_db / 10.0)
        pe = 0.0
        for r in RATES[: RATE_INDEX[rate_mbps] + 1]:
            pe = max(pe, self._decoded_ber(snr, r))
        if pe <= 0.0:
            return 0.0
        if pe >= 1.0:
            return 1.0
        return 1.0 - (1.0 - pe) ** bits


def survival_probability(chunks, rate_mbps: int, total_bits: float, model) -> float:
    """Decode probability of a frame received as (duration_ns, sinr_db) chunks.

    Bits are apportioned to chunks by time share; the frame survives only if
    every chunk survives.
    """
    total_dur = sum(dur for dur, _ in chunks)
    p = 1.0
    for dur, sinr_db in chunks:
        p *= 1.0 - model.per(sinr_db, rate_mbps, total_bits * (dur / total_dur))
        if p <= 0.0:
            return 0.0
    return p


# ---------------------------------------------------------------------------
# shared medium


class _Tx:
    __slots__ = ("src", "psdu", "rate", "start", "end")

    def __init__(self, src, psdu, rate, start, end):
        self.src = src
        self.psdu = psdu
        self.rate = rate
        self.start = start
        self.end = end


class _Node:
    __slots__ = ("pos", "mac", "rng", "busy", "lock", "txing", "last_ok")

    def __init__(self, pos, mac, rng):
        self.pos = pos
        self.mac = mac
        self.rng = rng
        self.busy = 0
        self.lock = None
        self.txing = False
        self.last_ok = True


class Medium:
    """Propagation and reception between a fixed set of nodes.

    A receiver locks onto a frame only if it is idle (not transmitting, no
    lock in progress, nothing decodable on the air) when the preamble
    arrives. There is no capture: later frames are lost and only degrade the
    locked frame through interference. MAC hooks fire on busy/idle edges and
    on decode decisions; the idle callback carries the deferral the receiver
    must apply (longer after a failed decode).
    """

    def __init__(self, engine: Engine, plp, radio, model, seed: int,
                 difs_ns: int = 34_000, eifs_ns: int = 94_000) -> None:
        self.engine = engine
        self.plp = plp
        self.radio = radio
        self.model = model
        self.difs_ns = difs_ns
        self.eifs_ns = eifs_ns
        self.noise_mw = dbm_to_mw(noise_floor_dbm(radio))
        self.ed_mw = dbm_to_mw(radio.energy_detect_dbm)
        self._seed = seed
        self._nodes: list[_Node] = []
        self._active: list[_Tx] = []
        self._final = False
        self._air_cache: dict[tuple[int, int], int] = {}
        self.tx_counts = {k: 0 for k in Kind}

    def add_node(self, pos, mac) -> int:
        if self._final:
            raise SimError("cannot add nodes after transmissions started")
        nid = len(self._nodes)
        self._nodes.append(_Node(pos, mac, RngStream(self._seed, nid * 8)))
        return nid

    def set_mac(self, nid: int, mac) -> None:
        self._nodes[nid].mac = mac

    def _finalize(self) -> None:
        n = len(self._nodes)
        self._dist = [[0.0] * n for _ in range(n)]
        self._prop = [[0] * n for _ in range(n)]
        self._rx_mw = [[0.0] * n for _ in range(n)]
        self._snr_db = [[0.0] * n for _ in range(n)]
        self._decod = [[False] * n for _ in range(n)]
        for i in range(n):
            xi, yi = self._nodes[i].pos
            for j in range(n):
                if i == j:
                    continue
                xj, yj = self._nodes[j].pos
                d = math.hypot(xi - xj, yi - yj)
                rx_dbm = rx_power_dbm(d, self.plp, self.radio)
                self._dist[i][j] = d
                self._prop[i][j] = propagation_delay_ns(d, self.radio)

                self._rx_mw[i][j] = dbm_to_mw(rx_dbm)
                self._snr_db[i][j] = rx_dbm - noise_floor_dbm(self.radio)
                self._decod[i][j] = rx_dbm >= self.radio.preamble_detect_dbm
        self._final = True

    # geometry accessors (also used by tests)
    def distance_m(self, i: int, j: int) -> float:
        self._final or self._finalize()
        return self._dist[i][j]

    def prop_ns(self, i: int, j: int) -> int:
        self._final or self._finalize()
        return self._prop[i][j]

    def decodable(self, i: int, j: int) -> bool:
        self._final or self._finalize()
        return self._decod[i][j]

    def airtime_ns(self, size_bytes: int, rate_mbps: int) -> int:
        key = (size_bytes, rate_mbps)
        a = self._air_cache.get(key)
        if a is None:
            a = frame_airtime_ns(size_bytes, rate_mbps)
            self._air_cache[key] = a
        return a

    def lock_active(self, nid: int) -> bool:
        return self._nodes[nid].lock is not None

    def begin_tx(self, src: int, psdu: Psdu, rate_mbps: int) -> int:
        """Start a transmission; returns its end time at the sender."""
        if not self._final:
            self._finalize()
        node = self._nodes[src]
        if node.txing:
            raise SimError(f"node {src} is already transmitting")
        now = self.engine.now
        end = now + self.airtime_ns(psdu.size_bytes, rate_mbps)
        tx = _Tx(src, psdu, rate_mbps, now, end)
        # transmitting aborts any reception in progress and clears the
        # residual error deferral
        node.lock = None
        node.txing = True
        node.last_ok = True
        if len(self._active) >= 16:
            horizon = now - _PRUNE_MARGIN_NS
            self._active = [o for o in self._active if o.end >= horizon]
        self._active.append(tx)
        self.tx_counts[psdu.kind] += 1
        sched = self.engine.schedule
        sched(end, self._own_end, src)
        for dst in range(len(self._nodes)):
            if dst != src and self._decod[src][dst]:
                p = self._prop[src][dst]
                sched(now + p, self._arrive, (tx, dst))
                sched(end + p, self._depart, (tx, dst))
        return end

    def _own_end(self, src: int) -> None:
        node = self._nodes[src]
        node.txing = False
        if node.mac is not None:
            node.mac.on_own_tx_end()
            if node.busy == 0:
                node.mac.on_medium_idle(self.engine.now, self.difs_ns)

    def _arrive(self, arg) -> None:
        tx, dst = arg
        node = self._nodes[dst]
        was = node.busy
        node.busy = was + 1
        if was == 0 and not node.txing:
            if node.lock is None:
                node.lock = tx
            if node.mac is not None:
                node.mac.on_medium_busy(self.engine.now)

    def _depart(self, arg) -> None:
        tx, dst = arg
        node = self._nodes[dst]
        node.busy -= 1
        if node.lock is tx:
            node.lock = None
            ok = self._decide(tx, dst)
            node.last_ok = ok
            if node.mac is not None:
                node.mac.on_rx_decision(ok, tx.psdu, tx.rate, tx.src)
        else:
            node.last_ok = False
        if node.busy == 0 and not node.txing and node.mac is not None:
            ifs = self.difs_ns if node.last_ok else self.eifs_ns
            node.mac.on_medium_idle(self.engine.now, ifs)

    def _decide(self, tx: _Tx, dst: int) -> bool:
        """Decode decision for a locked frame, chunked at interference edges."""
        node = self._nodes[dst]
        prop = self._prop
        t0 = tx.start + prop[tx.src][dst]
        t1 = tx.end + prop[tx.src][dst]
        sig_mw = self._rx_mw[tx.src][dst]
        bits = 8 * tx.psdu.size_bytes
        overlaps = []
        for o in self._active:
            if o is tx or o.src == dst:
                continue
            a = o.start + prop[o.src][dst]
            if a >= t1:
                continue
            b = o.end + prop[o.src][dst]
            if b <= t0:
                continue
            overlaps.append((max(a, t0), min(b, t1), self._rx_mw[o.src][dst]))
        if not overlaps:
            p = 1.0 - self.model.per(self._snr_db[tx.src][dst], tx.rate, bits)
        else:
            edges = {t0, t1}
            for a, b, _ in overlaps:
                edges.add(a)
                edges.add(b)
            cuts = sorted(edges)
            chunks = []
            for a, b in zip(cuts, cuts[1:]):
                imw = sum(mw for oa, ob, mw in overlaps if oa < b and ob > a)
                sinr_db = 10.0 * math.log10(sig_mw / (self.noise_mw + imw))
                chunks.append((b - a, sinr_db))
            p = survival_probability(chunks, tx.rate, bits, self.model)
        if p >= 1.0:
            return True
        if p <= 0.0:
            return False
        return node.rng.random() < p

    def carrier_sense(self, nid: int) -> bool:
        """Busy if transmitting, a decodable frame is on the air, or total
        foreign energy reaches the detection floor."""
        node = self._nodes[nid]
        if node.txing:
            return True
        if not self._final:
            return False
        now = self.engine.now
        energy_mw = 0.0
        for o in self._active:
            if o.src == nid:
                continue
            p = self._prop[o.src][nid]
            if o.start + p <= now < o.end + p:
                if self._decod[o.src][nid]:
                    return True
                energy_mw += self._rx_mw[o.src][nid]
        return energy_mw >= self.ed_mw
