"""Sample kurtosis across frequency bins, plain and level-equalized.

Kurtosis here is the ratio of the fourth to the squared second central
sample moment, with the population divisor K. Frames whose bins all share
one value have zero variance and no defined kurtosis; they are marked
invalid (NaN) rather than raised, and callers skip them.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class KurtosisSeries(NamedTuple):
    """Per-frame kurtosis values with NaN at invalid frames."""

    values: np.ndarray
    valid: np.ndarray


def frame_kurtosis(frame) -> float:
    """Sample kurtosis of one frame's bin values; NaN when variance is zero."""
    x = np.asarray(frame, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least two bins")
    d = x - x.mean()
    m2 = np.mean(d * d)
    if m2 == 0.0:
        return float("nan")
    m4 = np.mean(d**4)
    return float(m4 / (m2 * m2))


def kurtosis_series(values: np.ndarray) -> KurtosisSeries:
    """Per-frame kurtosis of an (L, K) array, vectorized over frames."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] < 2:
        raise ValueError("expected (L, K) with K >= 2")
    d = x - x.mean(axis=1, keepdims=True)
    d2 = d * d
    m2 = d2.mean(axis=1)
    m4 = (d2 * d2).mean(axis=1)
    valid = m2 > 0.0
    out = np.full(x.shape[0], np.nan)
    np.divide(m4, m2 * m2, out=out, where=valid)
    return KurtosisSeries(out, valid)


def alpha_weights(values: np.ndarray) -> np.ndarray:
    """Reciprocal temporal mean per bin; silent bins get weight 0.

    Multiplying a spectrogram by these weights equalizes the long-term
    level of every bin, so no single loud bin dominates the kurtosis.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError("expected a non-empty (L, K) array")
    mean = x.mean(axis=0)
    w = np.zeros_like(mean)
    np.divide(1.0, mean, out=w, where=mean > 0)
    return w


def weighted_frame_kurtosis(frame, alpha) -> float:
    """Kurtosis of a frame after per-bin weighting."""
    return frame_kurtosis(np.asarray(frame, dtype=np.float64) * np.asarray(alpha))


def weighted_kurtosis_series(values: np.ndarray, alpha: np.ndarray) -> KurtosisSeries:
    """Per-frame kurtosis of an (L, K) array scaled by per-bin weights."""
    return kurtosis_series(np.asarray(values, dtype=np.float64) * alpha[None, :])
