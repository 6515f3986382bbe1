"""Least-squares slope fits on log2 scales."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    max_residual: float
    residuals: tuple[float, ...]

    @property
    def residuals_monotone(self) -> bool:
        """True when the signed residuals move monotonically with j."""
        r = np.asarray(self.residuals)
        d = np.diff(r)
        return bool(np.all(d >= -1e-12) or np.all(d <= 1e-12))


def fit_log2_slope(points) -> SlopeFit:
    """Least-squares line through (j, log2 value); values must be positive.

    points: iterable of (j, value) with at least three entries.
    """
    pts = list(points)
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points for a slope fit, got {len(pts)}")
    j = np.array([float(a) for a, _ in pts])
    v = np.array([float(b) for _, b in pts])
    if np.any(v <= 0.0) or not np.all(np.isfinite(v)):
        raise ValueError("slope fit needs positive finite values")
    y = np.log2(v)
    design = np.stack([j, np.ones_like(j)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (slope * j + intercept)
    return SlopeFit(
        float(slope),
        float(intercept),
        float(np.max(np.abs(resid))),
        tuple(float(r) for r in resid),
    )
