"""Rolling-window comparative forecasting experiments.

Slides a history window across a series, forecasts the next `horizon`
samples with each enabled method, concatenates the forecasts into aligned
tracks, and reports L2 residuals plus the five-number summary of every track
against the raw truth over the same span.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import LinearParams, linear_forecast
from .causal import CausalParams, causal_forecast, moving_average
from .salsa import SalsaParams, salsa_forecast
from .series import (
    ResidualReport,
    SummaryStats,
    TimeSeries,
    l2_residual,
    rolling_windows,
    summary_stats,
)

__all__ = [
    "METHOD_ORDER",
    "ExperimentConfig",
    "ExperimentResult",
    "run_experiment",
    "render_report",
    "render_plot_csv",
]

# column order of the comparison tables: raw data first, then these
METHOD_ORDER = ("causal", "salsa", "linear")

_DISPLAY = {"causal": "Causal Forecast", "salsa": "Salsa Forecast", "linear": "Linear Forecast"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Rolling-window experiment settings.

    stride defaults to the horizon (non-overlapping forecast segments).
    lookahead_smoothing smooths the entire series once up front, so each
    window's smoothed values can see neighbouring (including future)
    samples; the default smooths strictly within each window.
    """

    horizon: int
    window_len: int = 91
    stride: int | None = None
    methods: tuple[str, ...] = METHOD_ORDER
    salsa: SalsaParams = SalsaParams()
    causal: CausalParams = CausalParams()
    linear: LinearParams = LinearParams()
    lookahead_smoothing: bool = False

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.window_len < 1:
            raise ValueError(f"window_len must be >= 1, got {self.window_len}")
        if self.stride is None:
            object.__setattr__(self, "stride", self.horizon)
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        methods = tuple(self.methods)
        if not methods:
            raise ValueError("no methods")
        unknown = set(methods) - set(METHOD_ORDER)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        # canonical table order regardless of how they were passed in
        object.__setattr__(
            self, "methods", tuple(m for m in METHOD_ORDER if m in methods)
        )


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    n_windows: int
    target_indices: np.ndarray
    truth_track: np.ndarray
    tracks: dict[str, np.ndarray]
    residuals: dict[str, ResidualReport | None]
    track_stats: dict[str, SummaryStats | None]
    truth_stats: SummaryStats
    wall_time: dict[str, float]
    failures: dict[str, list[int]] = field(default_factory=dict)
    smoothed_series: np.ndarray | None = None


def _forecast_one(method: str, config: ExperimentConfig, hist, horizon, presmoothed):
    if method == "salsa":
        return salsa_forecast(hist, horizon, config.salsa, track_cost=False)
    if method == "causal":
        return causal_forecast(hist, horizon, config.causal, presmoothed=presmoothed)
    return linear_forecast(hist, horizon, config.linear)


def run_experiment(series: TimeSeries, config: ExperimentConfig) -> ExperimentResult:
    """Run every enabled method over all rolling windows of the series.

    A method failing on a window is recorded in result.failures and that
    window's slots in its track are NaN; residuals and track statistics are
    computed over the successful windows only.
    """
    windows = rolling_windows(series, config.window_len, config.horizon, config.stride)
    n_win = len(windows)
    horizon = config.horizon

    # presentation curve, and the smoothed source for lookahead mode
    full_smoothed = moving_average(series.values, config.causal.ma_width)

    target_indices = np.concatenate(
        [np.arange(win.s + 1, win.s + 1 + horizon) for win, _ in windows]
    )
    truth_track = np.concatenate([truth for _, truth in windows])

    tracks = {m: np.full(n_win * horizon, np.nan) for m in config.methods}
    failures: dict[str, list[int]] = {m: [] for m in config.methods}
    wall = {m: 0.0 for m in config.methods}

    for w_idx, (win, _) in enumerate(windows):
        hist = series.values[win.q : win.s + 1]
        presmoothed = full_smoothed[win.q : win.s + 1] if config.lookahead_smoothing else None
        for method in config.methods:
            t0 = time.perf_counter()
            try:
                fc = _forecast_one(method, config, hist, horizon, presmoothed)
                tracks[method][w_idx * horizon : (w_idx + 1) * horizon] = fc
            except Exception:  # noqa: BLE001 - window skipped for that method
                failures[method].append(w_idx)
            wall[method] += time.perf_counter() - t0

    residuals: dict[str, ResidualReport | None] = {}
    track_stats: dict[str, SummaryStats | None] = {}
    for method in config.methods:
        ok = ~np.isnan(tracks[method])
        if ok.any():
            residuals[method] = l2_residual(tracks[method][ok], truth_track[ok])
            track_stats[method] = summary_stats(tracks[method][ok])
        else:
            residuals[method] = None
            track_stats[method] = None

    return ExperimentResult(
        config=config,
        n_windows=n_win,
        target_indices=target_indices,
        truth_track=truth_track,
        tracks=tracks,
        residuals=residuals,
        track_stats=track_stats,
        truth_stats=summary_stats(truth_track),
        wall_time=wall,
        failures=failures,
        smoothed_series=full_smoothed,
    )


def _table_cells(result: ExperimentResult) -> tuple[list[str], list[list]]:
    """Header and rows of the comparison table, raw data column first."""
    methods = result.config.methods
    if not methods:
        raise ValueError("no methods")
    header = ["Data Type", "Raw Data"] + [_DISPLAY[m] for m in methods]

    def stat_row(label, attr):
        row = [label, getattr(result.truth_stats, attr)]
        for m in methods:
            st = result.track_stats[m]
            row.append(None if st is None else getattr(st, attr))
        return row

    rows = [
        stat_row("Min", "min"),
        stat_row("Max", "max"),
        stat_row("Mean", "mean"),
        stat_row("STD", "std"),
        stat_row("Range", "range"),
    ]
    res_total = ["Total L2 residual", None]
    res_pp = ["Total L2 residual per point", None]
    for m in methods:
        rep = result.residuals[m]
        res_total.append(None if rep is None else rep.total_l2)
        res_pp.append(None if rep is None else rep.per_point)
    rows.append(res_total)
    rows.append(res_pp)
    return header, rows


def render_report(result: ExperimentResult, fmt: str = "text") -> str:
    """Comparison table in text, csv or json form.

    Rows: Min/Max/Mean/STD/Range and the total / per-point L2 residuals.
    Columns: raw truth over the forecast span, then one per method.
    """
    header, rows = _table_cells(result)

    if fmt == "text":
        def show(v):
            if v is None:
                return ""
            return f"{v:.6g}" if isinstance(v, float) else str(v)

        cells = [header] + [[show(v) for v in row] for row in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        lines = []
        for r_idx, row in enumerate(cells):
            lines.append(
                "  ".join(col.ljust(widths[i]) for i, col in enumerate(row)).rstrip()
            )
            if r_idx == 0:
                lines.append("  ".join("-" * widths[i] for i in range(len(widths))))
        meta = (
            f"windows={result.n_windows} horizon={result.config.horizon} "
            f"stride={result.config.stride} window_len={result.config.window_len}"
        )
        return "\n".join([meta] + lines) + "\n"

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                ["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row]
            )
        return buf.getvalue()

    if fmt == "json":
        payload = {
            "n_windows": result.n_windows,
            "horizon": result.config.horizon,
            "stride": result.config.stride,
            "window_len": result.config.window_len,
            "columns": header[1:],
            "rows": {
                row[0]: {col: row[i + 1] for i, col in enumerate(header[1:])}
                for row in rows
            },
            "failures": {m: result.failures[m] for m in result.config.methods},
            "wall_time_s": result.wall_time,
        }
        return json.dumps(payload, indent=2) + "\n"

    raise ValueError(f"unsupported format: {fmt!r}")


def render_plot_csv(result: ExperimentResult) -> str:
    """Plot-ready curves, one column each, aligned on the truth indices.

    Columns: series index, raw truth, the smoothed series at that index,
    then one forecast-track column per method. Failed windows leave empty
    cells.
    """
    methods = result.config.methods
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "raw", "smoothed"] + list(methods))
    smoothed = result.smoothed_series
    for i, idx in enumerate(result.target_indices):
        row = [int(idx), repr(float(result.truth_track[i]))]
        row.append("" if smoothed is None else repr(float(smoothed[idx])))
        for m in methods:
            v = result.tracks[m][i]
            row.append("" if np.isnan(v) else repr(float(v)))
        writer.writerow(row)
    return buf.getvalue()
