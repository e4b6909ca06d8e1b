#! /usr/bin/env python3
"""Peak detection on periodic grids."""
import dataclasses
import typing as ty

import numpy as np
from scipy import signal

NOISE_FLOOR_FACTOR = 3.0


@dataclasses.dataclass(frozen=True)
class Peak:
    """A refined peak of a sampled curve."""

    position: float
    height: float
    width: float


@dataclasses.dataclass
class PeakSet:
    """Peaks above the noise floor, sorted by decreasing height."""

    peaks: ty.List[Peak]
    noise_floor: float

    def __len__(self) -> int:
        return len(self.peaks)

    @property
    def positions(self) -> np.ndarray:
        return np.array([peak.position for peak in self.peaks])

    @property
    def heights(self) -> np.ndarray:
        return np.array([peak.height for peak in self.peaks])

    def closest(self, position: float, period: float = 2 * np.pi) -> ty.Optional[Peak]:
        """Return the peak nearest to ``position`` on the circle of length ``period``."""
        if not self.peaks:
            return None
        distances = [abs(circular_difference(peak.position, position, period)) for peak in self.peaks]
        return self.peaks[int(np.argmin(distances))]


def circular_difference(first: float, second: float, period: float = 2 * np.pi) -> float:
    """Return ``first - second`` wrapped into ``[-period/2, period/2)``."""
    return float((first - second + period / 2) % period - period / 2)


def detect_periodic_peaks(
    grid: np.ndarray,
    values: np.ndarray,
    threshold_factor: float = NOISE_FLOOR_FACTOR,
    period: float = 2 * np.pi,
) -> PeakSet:
    """Find the local maxima of ``values`` above ``threshold_factor`` times its median.

    The grid is uniform and periodic with ``period``. Peak positions and heights are
    refined by a parabola through the three samples around each maximum; widths are
    full widths at half maximum.

    :param grid: uniform sample positions, first point at ``grid[0]``.
    :type grid: np.ndarray
    :param values: non-negative samples on ``grid``.
    :type values: np.ndarray
    :return: the detected peaks and the noise floor used.
    :rtype: PeakSet
    """
    values = np.asarray(values, dtype=float)
    size = len(values)
    step = period / size
    noise_floor = float(np.median(values))

    pad = size // 2
    padded = np.concatenate([values[-pad:], values, values[:pad]])
    indices, _ = signal.find_peaks(padded, height=threshold_factor * noise_floor)
    indices = indices[(indices >= pad) & (indices < pad + size)]
    widths = signal.peak_widths(padded, indices, rel_height=0.5)[0] if len(indices) else []

    peaks = []
    for index, width in zip(indices, widths):
        left, center, right = padded[index - 1], padded[index], padded[index + 1]
        curvature = left - 2 * center + right
        offset = 0.5 * (left - right) / curvature if curvature != 0 else 0.0
        height = center - 0.25 * (left - right) * offset
        position = (grid[0] + (index - pad + offset) * step) % period
        peaks.append(Peak(position=float(position), height=float(height), width=float(width * step)))

    peaks.sort(key=lambda peak: -peak.height)
    return PeakSet(peaks=peaks, noise_floor=noise_floor)
