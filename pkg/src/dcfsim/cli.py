"""Command line front end: parse sweep configs, run points, write CSV + manifest.

The CSV schema is the package's public output contract; everything else
(figures, analyses) consumes these files and never the simulator internals.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import sys
import time
from pathlib import Path

from . import __version__
from .mac import MacParams
from .phy import RATES, PathLossParams, RadioParams
from .scenario import (
    ERROR_MODELS,
    MIN_STATION_DISTANCE_M,
    SCENARIOS,
    PointConfig,
    derive_point_seed,
    run_point,
)
from .traffic import BurstyProfile, PeriodicProfile

CSV_COLUMNS = (
    ["config", "name", "d_s_m", "seed", "plr", "mu_d_us", "sigma_d_us",
     "d_min_us", "p99_us", "p999_us", "mu_a", "mu_r_mbps", "mu_p_uw"]
    + [f"f_{r}" for r in RATES]
    + [f"s_{r}" for r in RATES]
)

DEFAULT_POSITIONS = tuple(float(d) for d in range(1, 51))

_SECTION_TYPES = {
    "radio": (RadioParams, {
        "tx_power_dbm": float, "preamble_detect_dbm": float,
        "energy_detect_dbm": float, "noise_figure_db": float,
        "bandwidth_hz": float, "prop_speed_mps": float,
    }),
    "path_loss": (PathLossParams, {
        "l0_db": float, "d0_m": float, "exponent": float,
    }),
    "mac": (MacParams, {
        "sifs_ns": int, "slot_ns": int, "difs_ns": int, "cw_min": int,
        "cw_max": int, "retry_limit": int, "ack_timeout_ns": int,
        "beacon_interval_ns": int, "beacon_bytes": int,
    }),
    "traffic_sut": (PeriodicProfile, {
        "period_s": float, "payload_bytes": int,
    }),
    "traffic_int": (BurstyProfile, {
        "payload_bytes": int, "spacing_s": float, "burst_mean": float,
        "burst_cap": int, "idle_mean_s": float, "idle_cap_s": float,
    }),
}

_TOP_KEYS = {
    "scenarios": None,
    "positions_m": None,
    "base_seed": int,
    "duration_s": float,
    "error_model": str,
    "app_start_s": float,
    "p_probe": float,
}


class ConfigError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """One scenario sweep: the unit that produces one CSV file."""

    label: str
    scenario: str
    positions_m: tuple
    base_seed: int = 1
    duration_s: float = 2000.0
    error_model: str = "threshold"
    app_start_s: float = 1.0
    p_probe: float = 0.1
    plp: PathLossParams = dataclasses.field(default_factory=PathLossParams)
    radio: RadioParams = dataclasses.field(default_factory=RadioParams)
    mac: MacParams = dataclasses.field(default_factory=MacParams)
    sut_traffic: PeriodicProfile = dataclasses.field(default_factory=PeriodicProfile)
    int_traffic: BurstyProfile = dataclasses.field(default_factory=BurstyProfile)

    def point(self, d_s_m: float) -> PointConfig:
        return PointConfig(
            scenario=self.scenario,
            d_s_m=d_s_m,
            seed=derive_point_seed(self.base_seed, self.scenario, d_s_m),
            duration_s=self.duration_s,
            error_model=self.error_model,
            app_start_s=self.app_start_s,
            p_probe=self.p_probe,
            plp=self.plp,
            radio=self.radio,
            mac=self.mac,
            sut_traffic=self.sut_traffic,
            int_traffic=self.int_traffic,
        )


def _fail(path, lineno: int, msg: str):
    raise ConfigError(f"{path}:{lineno}: {msg}")


def _coerce(path, lineno, key, raw, typ):
    try:
        if typ is int:
            # tolerate scientific notation for large integers (20e6)
            v = float(raw)
            if v != int(v):
                raise ValueError
            return int(v)
        return typ(raw)
    except ValueError:
        _fail(path, lineno, f"value {raw!r} for key {key!r} is not a valid {typ.__name__}")


def _parse_positions(path, lineno, raw: str):
    """Comma list of distances; 'a:b' and 'a:b:step' expand inclusively."""
    out = []
    for tok in raw.split(","):
        tok = tok.strip()
        if not tok:
            continue
        parts = tok.split(":")
        if len(parts) == 1:
            vals = [_coerce(path, lineno, "positions_m", parts[0], float)]
        elif len(parts) in (2, 3):
            lo = _coerce(path, lineno, "positions_m", parts[0], float)
            hi = _coerce(path, lineno, "positions_m", parts[1], float)
            step = _coerce(path, lineno, "positions_m", parts[2], float) if len(parts) == 3 else 1.0
            if step <= 0 or hi < lo:
                _fail(path, lineno, f"bad position range {tok!r}")
            vals = []
            k = 0
            while lo + k * step <= hi + 1e-9:
                vals.append(round(lo + k * step, 6))
                k += 1
        else:
            _fail(path, lineno, f"bad position token {tok!r}")
        out.extend(vals)
    for d in out:
        if d < MIN_STATION_DISTANCE_M:
            _fail(path, lineno, f"position {d} m is below the minimum {MIN_STATION_DISTANCE_M} m")
    if not out:
        _fail(path, lineno, "positions_m is empty")
    return tuple(out)


def parse_config(path) -> list[SweepConfig]:
    """Read a sweep config file into one SweepConfig per scenario.

    Unknown sections or keys are rejected with the offending line number so
    typos never silently fall back to defaults.
    """
    path = Path(path)
    top: dict = {}
    sections: dict = {name: {} for name in _SECTION_TYPES}
    current = None
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if text.startswith("[") and text.endswith("]"):
            current = text[1:-1].strip()
            if current not in _SECTION_TYPES:
                _fail(path, lineno, f"unknown section [{current}]")
            continue
        if "=" not in text:
            _fail(path, lineno, f"expected 'key = value', got {text!r}")
        key, _, raw = text.partition("=")
        key = key.strip()
        raw = raw.strip()
        if current is None:
            if key not in _TOP_KEYS:
                _fail(path, lineno, f"unknown key {key!r}")
            if key == "scenarios":
                names = tuple(t.strip() for t in raw.split(",") if t.strip())
                for name in names:
                    if name not in SCENARIOS:
                        _fail(path, lineno,
                              f"unknown scenario {name!r}, expected one of {SCENARIOS}")
                top[key] = names
            elif key == "positions_m":
                top[key] = _parse_positions(path, lineno, raw)
            else:
                val = _coerce(path, lineno, key, raw, _TOP_KEYS[key])
                if key == "error_model" and val not in ERROR_MODELS:
                    _fail(path, lineno,
                          f"unknown error model {val!r}, expected one of {ERROR_MODELS}")
                if key == "duration_s" and val <= 0:
                    _fail(path, lineno, "duration_s must be positive")
                top[key] = val
        else:
            _, fields = _SECTION_TYPES[current]
            if key not in fields:
                _fail(path, lineno, f"unknown key {key!r} in section [{current}]")
            sections[current][key] = _coerce(path, lineno, key, raw, fields[key])

    label = path.stem
    kwargs = {k: v for k, v in top.items() if k not in ("scenarios", "positions_m")}
    if "base_seed" in kwargs:
        kwargs["base_seed"] = int(kwargs["base_seed"])
    built = {}
    for name, (cls, _) in _SECTION_TYPES.items():
        built[name] = cls(**sections[name]) if sections[name] else cls()
    scenarios = top.get("scenarios", SCENARIOS)
    positions = top.get("positions_m", DEFAULT_POSITIONS)
    return [
        SweepConfig(
            label=label,
            scenario=name,
            positions_m=positions,
            plp=built["path_loss"],
            radio=built["radio"],
            mac=built["mac"],
            sut_traffic=built["traffic_sut"],
            int_traffic=built["traffic_int"],
            **kwargs,
        )
        for name in scenarios
    ]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def _row(sweep: SweepConfig, cfg: PointConfig, s) -> str:
    vals = [
        sweep.label, sweep.scenario, _fmt(cfg.d_s_m), str(cfg.seed),
        _fmt(s.plr), _fmt(s.mu_d_us), _fmt(s.sigma_d_us), _fmt(s.d_min_us),
        _fmt(s.p99_us), _fmt(s.p999_us), _fmt(s.mu_a), _fmt(s.mu_r_mbps),
        _fmt(s.mu_p_uw),
    ]
    vals += [_fmt(s.rate_attempt_freq[r]) for r in RATES]
    vals += [_fmt(s.rate_success_ratio[r]) for r in RATES]
    return ",".join(vals)


def _run_job(cfg: PointConfig):
    res = run_point(cfg)
    return res.summary, res.wall_s


def run(sweeps: list[SweepConfig], parallel: int, out_dir) -> int:
    """Execute every sweep point and write one CSV per sweep plus a manifest.

    Rows appear in position order regardless of completion order, so the
    output bytes depend only on the configs and seeds. Returns 0 only when
    every point completed.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t_start = time.time()
    jobs = [(sweep, d, sweep.point(d)) for sweep in sweeps for d in sweep.positions_m]
    results: dict = {}
    failures = []
    if parallel > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallel) as pool:
            futs = {pool.submit(_run_job, cfg): i for i, (_, _, cfg) in enumerate(jobs)}
            for fut in concurrent.futures.as_completed(futs):
                i = futs[fut]
                try:
                    results[i] = fut.result()
                except Exception as exc:  # noqa: BLE001 - sweep must survive one bad point
                    failures.append((i, exc))
    else:
        for i, (_, _, cfg) in enumerate(jobs):
            try:
                results[i] = _run_job(cfg)
            except Exception as exc:  # noqa: BLE001
                failures.append((i, exc))

    manifest = [
        f"tool: dcfsim {__version__}",
        f"started: {time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime(t_start))}",
        f"parallel: {parallel}",
    ]
    for sweep in sweeps:
        rows = []
        manifest.append(f"sweep: {sweep.label} {sweep.scenario}")
        manifest.append(f"  config: {sweep}")
        for i, (sw, d, cfg) in enumerate(jobs):
            if sw is not sweep:
                continue
            if i in results:
                summary, wall = results[i]
                rows.append(_row(sweep, cfg, summary))
                manifest.append(f"  point d={_fmt(d)} seed={cfg.seed} wall_s={wall:.3f}")
            else:
                manifest.append(f"  point d={_fmt(d)} seed={cfg.seed} FAILED")
        csv_path = out / f"{sweep.label}_{sweep.scenario}.csv"
        csv_path.write_text("".join(line + "\n" for line in [",".join(CSV_COLUMNS)] + rows))
    for i, exc in sorted(failures, key=lambda t: t[0]):
        sweep, d, cfg = jobs[i]
        print(f"error: {sweep.label} {sweep.scenario} d={_fmt(d)}: {exc}", file=sys.stderr)
    manifest.append(f"finished: {time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime())}")
    manifest.append(f"elapsed_s: {time.time() - t_start:.3f}")
    (out / "manifest.txt").write_text("\n".join(manifest) + "\n")
    return 0 if not failures else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="dcfsim",
        description="Sweep a single-cell wireless simulation over station distance.",
    )
    ap.add_argument("--config", required=True, help="sweep config file")
    ap.add_argument("--out", required=True, help="output directory for CSV + manifest")
    ap.add_argument("--seed", type=int, default=None, help="override base seed")
    ap.add_argument("--duration-s", type=float, default=None, help="override run duration")
    ap.add_argument("--positions", default=None,
                    help="override positions, e.g. '1,5,10' or '1:50' or '1:50:0.5'")
    ap.add_argument("--parallel", type=int, default=1, help="worker processes")
    ap.add_argument("--error-model", choices=ERROR_MODELS, default=None,
                    help="override reception error model")
    args = ap.parse_args(argv)

    try:
        sweeps = parse_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    overrides = {}
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.duration_s is not None:
        if args.duration_s <= 0:
            print("error: --duration-s must be positive", file=sys.stderr)
            return 2
        overrides["duration_s"] = args.duration_s
    if args.error_model is not None:
        overrides["error_model"] = args.error_model
    if args.positions is not None:
        try:
            overrides["positions_m"] = _parse_positions("<--positions>", 0, args.positions)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    if args.parallel < 1:
        print("error: --parallel must be >= 1", file=sys.stderr)
        return 2
    if overrides:
        sweeps = [dataclasses.replace(s, **overrides) for s in sweeps]
    return run(sweeps, args.parallel, args.out)


if __name__ == "__main__":
    sys.exit(main())
