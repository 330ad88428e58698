"""Per-point summary statistics over packet delivery records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .phy import RATES


@dataclass(slots=True)
class TxAttempt:
    rate_mbps: int
    start_ns: int
    airtime_ns: int
    ok: bool
    cw: int  # contention window in force when the attempt was made


@dataclass(slots=True)
class PacketRecord:
    seqno: int
    gen_ns: int
    acked: bool
    ack_rx_ns: int | None
    attempts: list = field(default_factory=list)


def nearest_rank_percentile(values, p: float):
    """Smallest element with at least fraction p of the sample at or below it."""
    xs = sorted(values)
    k = math.ceil(p * len(xs))
    return xs[max(k, 1) - 1]


def pearson(xs, ys) -> float:
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    num = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = math.sqrt(
        math.fsum((x - mx) ** 2 for x in xs) * math.fsum((y - my) ** 2 for y in ys)
    )
    if den == 0.0:
        return math.nan
    return num / den


@dataclass(slots=True)
class PointSummary:
    n_packets: int
    n_dropped: int
    plr: float | None
    mu_d_us: float | None
    sigma_d_us: float | None
    d_min_us: float | None
    p99_us: float | None
    p999_us: float | None
    mu_a: float | None
    mu_r_mbps: float | None
    mu_p_uw: float
    rate_attempt_freq: dict
    rate_success_ratio: dict


def summarize(records, duration_s: float, tx_power_mw: float) -> PointSummary:
    """Roll one run's packet records into the published point statistics.

    Latency statistics cover acknowledged packets only; attempt-pool
    statistics (rate frequencies, success ratios, mean rate, radiated power)
    cover every attempt including those of dropped packets.
    """
    n = len(records)
    dropped = sum(1 for r in records if not r.acked)
    lat_us = [(r.ack_rx_ns - r.gen_ns) / 1000.0 for r in records if r.acked]
    att_counts = {r: 0 for r in RATES}
    succ_counts = {r: 0 for r in RATES}
    airtime_mw_sum = 0.0
    rate_sum = 0
    n_attempts = 0
    acked_attempts = 0
    for rec in records:
        for a in rec.attempts:
            att_counts[a.rate_mbps] += 1
            if a.ok:
                succ_counts[a.rate_mbps] += 1
            airtime_mw_sum += a.airtime_ns * tx_power_mw
            rate_sum += a.rate_mbps
            n_attempts += 1
        if rec.acked:
            acked_attempts += len(rec.attempts)
    if lat_us:
        mu = math.fsum(lat_us) / len(lat_us)
        sigma = math.sqrt(math.fsum((v - mu) ** 2 for v in lat_us) / len(lat_us))
        d_min = min(lat_us)
        p99 = nearest_rank_percentile(lat_us, 0.99)
        p999 = nearest_rank_percentile(lat_us, 0.999)
        mu_a = acked_attempts / (n - dropped)
    else:
        mu = sigma = d_min = p99 = p999 = mu_a = None
    freq = {r: (att_counts[r] / n_attempts if n_attempts else 0.0) for r in RATES}
    ratio = {
        r: (succ_counts[r] / att_counts[r] if att_counts[r] else None) for r in RATES
    }
    return PointSummary(
        n_packets=n,
        n_dropped=dropped,
        plr=(dropped / n) if n else None,
        mu_d_us=mu,
        sigma_d_us=sigma,
        d_min_us=d_min,
        p99_us=p99,
        p999_us=p999,
        mu_a=mu_a,
        mu_r_mbps=(rate_sum / n_attempts) if n_attempts else None,
        mu_p_uw=airtime_mw_sum / duration_s * 1e-6,
        rate_attempt_freq=freq,
        rate_success_ratio=ratio,
    )
