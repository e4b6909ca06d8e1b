#! /usr/bin/env python3
"""Power-law fits."""
import dataclasses
import typing as ty

import numpy as np
from scipy import stats

from spacetime_duality.common.exceptions import FitWindowError

MIN_FIT_POINTS = 4


@dataclasses.dataclass(frozen=True)
class PowerLawFit:
    """Result of fitting ``y ~ x**alpha`` on a log-log scale."""

    alpha: float
    stderr: float
    confidence_interval: ty.Tuple[float, float]
    intercept: float
    x: ty.Tuple[float, ...]
    y: ty.Tuple[float, ...]


def fit_power_law(x: ty.Sequence[float], y: ty.Sequence[float], confidence: float = 0.95) -> PowerLawFit:
    """Least-squares slope of ``log y`` against ``log x``.

    :raises FitWindowError: with fewer than four points or non-positive data.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < MIN_FIT_POINTS:
        raise FitWindowError(f"fit window too small: {len(x)} points, need at least {MIN_FIT_POINTS}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise FitWindowError("power-law fit needs strictly positive data")

    result = stats.linregress(np.log(x), np.log(y))
    quantile = stats.t.ppf(0.5 + confidence / 2, len(x) - 2)
    half_width = quantile * result.stderr

    return PowerLawFit(
        alpha=float(result.slope),
        stderr=float(result.stderr),
        confidence_interval=(float(result.slope - half_width), float(result.slope + half_width)),
        intercept=float(result.intercept),
        x=tuple(x.tolist()),
        y=tuple(y.tolist()),
    )
