"""Linear extrapolation baselines.

Two variants of the trend line through the window's end:

* two_point_span: slope from the endpoints of an A-point lookback,
  slope = (z[t0] - z[t0 - A]) / A
* code_slope: one-step difference spread over the horizon,
  slope = (z[t0] - z[t0 - 1]) / horizon

Both forecast z[t0] + slope * j for j = 1..horizon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LinearParams", "linear_forecast", "VARIANTS"]

VARIANTS = ("two_point_span", "code_slope")


@dataclass(frozen=True)
class LinearParams:
    lookback: int = 1
    variant: str = "code_slope"

    def __post_init__(self):
        if self.lookback < 1:
            raise ValueError(f"lookback must be >= 1, got {self.lookback}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


def linear_forecast(history, horizon: int, params: LinearParams = LinearParams()) -> np.ndarray:
    hist = np.asarray(history, dtype=float)
    if hist.ndim != 1:
        raise ValueError("history must be 1-D")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if params.variant == "two_point_span":
        if hist.size <= params.lookback:
            raise ValueError(
                f"need more than lookback={params.lookback} samples, have {hist.size}"
            )
        slope = (hist[-1] - hist[-1 - params.lookback]) / params.lookback
    else:
        if hist.size < 2:
            raise ValueError("code_slope needs at least 2 samples")
        slope = (hist[-1] - hist[-2]) / horizon
    return hist[-1] + slope * np.arange(1, horizon + 1, dtype=float)
