"""Cell geometry, per-point configuration, and single-point execution."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .engine import Engine, RngStream, mix64, s_to_ns
from .mac import Dcf, MacParams
from .metrics import PointSummary, summarize
from .minstrel import Minstrel, MinstrelParams
from .phy import (
    Medium,
    NistErrorModel,
    PathLossParams,
    RadioParams,
    ThresholdErrorModel,
    dbm_to_mw,
    default_thresholds,
)
from .traffic import BurstyProfile, BurstySource, PeriodicProfile, PeriodicSource

SCENARIOS = ("NO_INT", "VISIBLE", "HIDDEN")
ERROR_MODELS = ("threshold", "analytic")
_SCENARIO_ID = {"NO_INT": 1, "VISIBLE": 2, "HIDDEN": 3}

# fixed geometry: access point at the origin, station under test on the x
# axis, interferer either next to the AP or far off to the side
INTERFERER_POS = {"VISIBLE": (0.0, 2.0), "HIDDEN": (-40.0, 2.0)}
MIN_STATION_DISTANCE_M = 1.0

AP_NODE = 0
SUT_NODE = 1
INT_NODE = 2

INT_QUEUE_CAP = 500
GRACE_S = 1.0

# per-node random stream purposes
_STREAM_BACKOFF = 1
_STREAM_PROBE = 2
_STREAM_TRAFFIC = 3


@dataclass(frozen=True)
class PointConfig:
    scenario: str = "NO_INT"
    d_s_m: float = 1.0
    seed: int = 1
    duration_s: float = 2000.0
    error_model: str = "threshold"
    app_start_s: float = 1.0
    p_probe: float = 0.1
    keep_records: bool = True
    plp: PathLossParams = field(default_factory=PathLossParams)
    radio: RadioParams = field(default_factory=RadioParams)
    mac: MacParams = field(default_factory=MacParams)
    sut_traffic: PeriodicProfile = field(default_factory=PeriodicProfile)
    int_traffic: BurstyProfile = field(default_factory=BurstyProfile)


def validate(cfg: PointConfig) -> None:
    if cfg.scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {cfg.scenario!r}, expected one of {SCENARIOS}")
    if cfg.d_s_m < MIN_STATION_DISTANCE_M:
        raise ValueError(
            f"station distance {cfg.d_s_m} m is below the minimum {MIN_STATION_DISTANCE_M} m"
        )
    if cfg.duration_s <= 0:
        raise ValueError(f"duration must be positive, got {cfg.duration_s}")
    if cfg.error_model not in ERROR_MODELS:
        raise ValueError(f"unknown error model {cfg.error_model!r}, expected one of {ERROR_MODELS}")
    if cfg.app_start_s < 0:
        raise ValueError(f"application start must be non-negative, got {cfg.app_start_s}")


def derive_point_seed(base_seed: int, scenario: str, d_s_m: float) -> int:
    """Stable per-point seed so sweep results never depend on job order."""
    return mix64(mix64(base_seed, _SCENARIO_ID[scenario]), int(round(d_s_m * 1000)))


@dataclass
class Sim:
    cfg: PointConfig
    engine: Engine
    medium: Medium
    ap: Dcf
    sut: Dcf
    intf: Dcf | None


def build(cfg: PointConfig) -> Sim:
    validate(cfg)
    engine = Engine()
    if cfg.error_model == "threshold":
        model = ThresholdErrorModel(default_thresholds(cfg.plp, cfg.radio))
    else:
        model = NistErrorModel()
    medium = Medium(
        engine, cfg.plp, cfg.radio, model, seed=cfg.seed,
        difs_ns=cfg.mac.difs_ns, eifs_ns=cfg.mac.eifs_ns(),
    )
    mparams = MinstrelParams(p_probe=cfg.p_probe)

    def _streams(node):
        return (
            RngStream(cfg.seed, node * 8 + _STREAM_BACKOFF),
            RngStream(cfg.seed, node * 8 + _STREAM_PROBE),
        )

    ap_id = medium.add_node((0.0, 0.0), None)
    sut_id = medium.add_node((cfg.d_s_m, 0.0), None)
    ap = Dcf(
        engine, medium, ap_id, cfg.mac,
        Minstrel(mparams, cfg.mac.beacon_bytes, cfg.mac.difs_ns, cfg.mac.sifs_ns),
        *_streams(ap_id), is_ap=True,
    )
    sut = Dcf(
        engine, medium, sut_id, cfg.mac,
        Minstrel(mparams, cfg.sut_traffic.psdu_bytes, cfg.mac.difs_ns, cfg.mac.sifs_ns),
        *_streams(sut_id), keep_records=cfg.keep_records,
    )
    medium.set_mac(ap_id, ap)
    medium.set_mac(sut_id, sut)
    end_ns = s_to_ns(cfg.duration_s)
    PeriodicSource(
        engine, sut.enqueue, cfg.sut_traffic, s_to_ns(cfg.app_start_s), end_ns, sut_id, ap_id
    )
    intf = None
    if cfg.scenario != "NO_INT":
        int_id = medium.add_node(INTERFERER_POS[cfg.scenario], None)
        intf = Dcf(
            engine, medium, int_id, cfg.mac,
            Minstrel(mparams, cfg.int_traffic.psdu_bytes, cfg.mac.difs_ns, cfg.mac.sifs_ns),
            *_streams(int_id), queue_cap=INT_QUEUE_CAP,
        )
        medium.set_mac(int_id, intf)
        BurstySource(
            engine, intf.enqueue, cfg.int_traffic,
            s_to_ns(cfg.app_start_s), end_ns, int_id, ap_id,
            rng=RngStream(cfg.seed, int_id * 8 + _STREAM_TRAFFIC),
        )
    return Sim(cfg, engine, medium, ap, sut, intf)


@dataclass
class PointResult:
    cfg: PointConfig
    summary: PointSummary
    records: list
    wall_s: float


def run_point(cfg: PointConfig) -> PointResult:
    t0 = time.perf_counter()
    sim = build(cfg)
    sim.engine.run_until(s_to_ns(cfg.duration_s + GRACE_S))
    # packets still unresolved after the grace window are excluded
    summary = summarize(sim.sut.records, cfg.duration_s, dbm_to_mw(cfg.radio.tx_power_dbm))
    return PointResult(cfg, summary, sim.sut.records, time.perf_counter() - t0)
