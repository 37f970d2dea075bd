import logging

import numpy as np
from scipy.signal import find_peaks

from quench.evolution.types import WavefunctionFrame

logger = logging.getLogger(__name__)

# Peaks lower than this fraction of the frame's largest density are ignored.
REL_PEAK_HEIGHT: float = 1e-4


def local_maxima_in_window(
    frame: WavefunctionFrame,
    window: tuple[float, float],
    rel_height: float = REL_PEAK_HEIGHT,
) -> list[tuple[float, float]]:
    """
    Find the local maxima of |Ψ|² whose position lies in `window`.

    Args:
        frame:
            The wavefunction frame.
        window:
            (lower, upper) bounds on the peak position.
        rel_height:
            Minimum peak height as a fraction of the frame's maximum density.

    Returns:
        peaks:
            (position, density) pairs, highest first.
    """

    lower, upper = window
    if upper <= lower:
        raise ValueError(f"Empty peak window [{lower}, {upper}]!")

    density: np.ndarray = frame.density()
    x: np.ndarray = frame.grid.points
    indices, properties = find_peaks(density, height=rel_height * float(density.max()))
    peaks: list[tuple[float, float]] = [
        (float(x[i]), float(h))
        for i, h in zip(indices, properties["peak_heights"])
        if lower <= x[i] <= upper
    ]
    peaks.sort(key=lambda peak: -peak[1])

    logger.debug("%d peaks in [%g, %g]", len(peaks), lower, upper)
    return peaks


def highest_peak(
    frame: WavefunctionFrame, window: tuple[float, float]
) -> tuple[float, float] | None:
    """The highest local maximum of |Ψ|² inside `window`, if any."""

    peaks = local_maxima_in_window(frame, window)
    return peaks[0] if peaks else None
