"""Figure builders over the sweep CSV schema.

Each style is a thin projection of the public CSV columns onto one plot;
nothing here knows how the numbers were produced.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 - backend must be pinned first

RATES = (6, 9, 12, 18, 24, 36, 48, 54)

X_COL = "d_s_m"
X_LABEL = "station distance [m]"

PNG_META = {"Software": "figgen"}


class FigureError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    style: str
    out_path: Path
    csv_paths: tuple


def load_rows(path) -> tuple[str, list[dict]]:
    """Read one sweep CSV; returns (series label, data rows)."""
    path = Path(path)
    if not path.exists():
        raise FigureError(f"{path}: no such CSV")
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if reader.fieldnames is None or not rows:
        raise FigureError(f"{path}: CSV has no data rows")
    label = rows[0].get("name") or path.stem
    return label, rows


def require_columns(path, rows: list[dict], columns) -> None:
    missing = [c for c in columns if c not in rows[0]]
    if missing:
        raise FigureError(f"{path}: missing columns: {', '.join(missing)}")


def column(rows: list[dict], name: str) -> list[float | None]:
    return [float(r[name]) if r[name] != "" else None for r in rows]


def _line(ax, xs, ys, **kw):
    pts = [(x, y) for x, y in zip(xs, ys) if y is not None]
    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", ms=3, **kw)


def _style_latency_attempts(fig, series):
    """mean and minimum latency on the left axis, attempts on the right"""
    ax = fig.subplots()
    ax2 = ax.twinx()
    for label, rows in series:
        xs = column(rows, X_COL)
        _line(ax, xs, column(rows, "mu_d_us"), label=f"{label} mu_d")
        _line(ax, xs, column(rows, "d_min_us"), ls="--", label=f"{label} d_min")
        _line(ax2, xs, column(rows, "mu_a"), ls=":", color="tab:red",
              label=f"{label} mu_a")
    ax.set_xlabel(X_LABEL)
    ax.set_ylabel("latency [us]")
    ax2.set_ylabel("attempts per delivered packet")
    ax.legend(loc="upper left", fontsize=8)
    ax2.legend(loc="upper right", fontsize=8)


_style_latency_attempts.columns = (X_COL, "mu_d_us", "d_min_us", "mu_a")
_style_latency_attempts.arity = (1, 1)


def _per_rate(fig, series, prefix, ylabel):
    ax = fig.subplots()
    for label, rows in series:
        xs = column(rows, X_COL)
        for r in RATES:
            _line(ax, xs, column(rows, f"{prefix}{r}"), label=f"{r} Mb/s")
    ax.set_xlabel(X_LABEL)
    ax.set_ylabel(ylabel)
    ax.set_ylim(-0.02, 1.05)
    ax.legend(loc="center left", fontsize=7, ncols=2)


def _style_rate_success(fig, series):
    """per-rate success ratio vs distance"""
    _per_rate(fig, series, "s_", "success ratio")


_style_rate_success.columns = (X_COL,) + tuple(f"s_{r}" for r in RATES)
_style_rate_success.arity = (1, 1)


def _style_rate_frequency(fig, series):
    """per-rate attempt share vs distance"""
    _per_rate(fig, series, "f_", "attempt share")


_style_rate_frequency.columns = (X_COL,) + tuple(f"f_{r}" for r in RATES)
_style_rate_frequency.arity = (1, 1)


def _style_latency_percentiles(fig, series):
    """tail percentiles on a log axis with loss ratio alongside"""
    ax = fig.subplots()
    ax2 = ax.twinx()
    for label, rows in series:
        xs = column(rows, X_COL)
        _line(ax, xs, column(rows, "p99_us"), label=f"{label} p99")
        _line(ax, xs, column(rows, "p999_us"), ls="--", label=f"{label} p99.9")
        plr = [None if v is None else 100.0 * v for v in column(rows, "plr")]
        _line(ax2, xs, plr, ls=":", color="tab:red", label=f"{label} PLR")
    ax.set_xlabel(X_LABEL)
    ax.set_yscale("log")
    ax.set_ylabel("latency percentile [us]")
    ax2.set_ylabel("packet loss ratio [%]")
    ax.legend(loc="upper left", fontsize=8)
    ax2.legend(loc="upper right", fontsize=8)


_style_latency_percentiles.columns = (X_COL, "p99_us", "p999_us", "plr")
_style_latency_percentiles.arity = (1, 1)


def _style_latency_attempts_overlay(fig, series):
    """latency/attempts comparison across two sweeps"""
    _style_latency_attempts(fig, series)


_style_latency_attempts_overlay.columns = _style_latency_attempts.columns
_style_latency_attempts_overlay.arity = (2, 4)


def _style_percentiles_plr_overlay(fig, series):
    """tail/loss comparison across two sweeps"""
    _style_latency_percentiles(fig, series)


_style_percentiles_plr_overlay.columns = _style_latency_percentiles.columns
_style_percentiles_plr_overlay.arity = (2, 4)


def _style_power_rate(fig, series):
    """radiated power on the left axis, mean attempt rate on the right"""
    ax = fig.subplots()
    ax2 = ax.twinx()
    for label, rows in series:
        xs = column(rows, X_COL)
        _line(ax, xs, column(rows, "mu_p_uw"), label=f"{label} mu_P")
        _line(ax2, xs, column(rows, "mu_r_mbps"), ls="--", color="tab:green",
              label=f"{label} mu_r")
    ax.set_xlabel(X_LABEL)
    ax.set_ylabel("radiated power [uW]")
    ax2.set_ylabel("mean attempt rate [Mb/s]")
    ax.legend(loc="upper left", fontsize=8)
    ax2.legend(loc="lower right", fontsize=8)


_style_power_rate.columns = (X_COL, "mu_p_uw", "mu_r_mbps")
_style_power_rate.arity = (1, 2)

STYLES = {
    "latency_attempts": _style_latency_attempts,
    "rate_success": _style_rate_success,
    "rate_frequency": _style_rate_frequency,
    "latency_percentiles": _style_latency_percentiles,
    "latency_attempts_overlay": _style_latency_attempts_overlay,
    "percentiles_plr_overlay": _style_percentiles_plr_overlay,
    "power_rate": _style_power_rate,
}


def render(spec: FigureSpec) -> Path:
    """Draw one figure; every validation error fires before any file is written."""
    builder = STYLES.get(spec.style)
    if builder is None:
        raise FigureError(f"unknown figure style {spec.style!r}")
    lo, hi = builder.arity
    if not lo <= len(spec.csv_paths) <= hi:
        raise FigureError(
            f"style {spec.style!r} takes {lo}..{hi} CSVs, got {len(spec.csv_paths)}"
        )
    series = []
    for path in spec.csv_paths:
        label, rows = load_rows(path)
        require_columns(path, rows, builder.columns)
        series.append((label, rows))
    fig = plt.figure(figsize=(6.0, 4.0), dpi=110)
    try:
        builder(fig, series)
        fig.tight_layout()
        out = Path(spec.out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, format="png", metadata=PNG_META)
    finally:
        plt.close(fig)
    return Path(spec.out_path)
