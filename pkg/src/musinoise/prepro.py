"""Perceptual pre-processing of power spectrograms.

Chain: convert bin powers to A-weighted decibels, limit them at a threshold
20 dB below the overall level and shift so the floor sits at zero, drop
frames that are entirely silent in the processed signal, and partition the
audible bins into sub-bands. The threshold is derived from the processed
signal and applied to both signals so their frames stay comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBand, EmptyAfterPreprocessing
from .stft import PowerSpectrogram, StftConfig

POWER_FLOOR = 1e-12  # pre-log floor; floored bins fall far below any threshold
DC_WEIGHT_DB = -100.0  # stand-in for -inf at the inaudible 0 Hz bin
THRESHOLD_DROP_DB = 20.0

DEFAULT_BANDS = ((50.0, 750.0), (750.0, 6000.0), (6000.0, 16000.0))


def a_weighting_db(freqs) -> np.ndarray:
    """A-weighting gain in dB at the given frequencies.

    Analytic magnitude response of the standard A curve (two low poles at
    20.6 Hz, poles at 107.7 and 737.9 Hz, double pole at 12.2 kHz),
    normalized with +2.00 dB so the gain at 1 kHz is 0 dB. 0 Hz maps to
    the finite surrogate DC_WEIGHT_DB.
    """
    f = np.asarray(freqs, dtype=np.float64)
    scalar = f.ndim == 0
    f = np.atleast_1d(f)
    f2 = f * f
    num = (12194.217**2) * f2 * f2
    den = (
        (f2 + 20.598997**2)
        * np.sqrt((f2 + 107.65265**2) * (f2 + 737.86223**2))
        * (f2 + 12194.217**2)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = 20.0 * np.log10(num / den) + 2.00
    gain = np.where(f > 0, gain, DC_WEIGHT_DB)
    return gain[0] if scalar else gain


def a_weight_table(cfg: StftConfig) -> np.ndarray:
    """Per-bin A-weighting gains for the one-sided spectrum of ``cfg``."""
    return a_weighting_db(cfg.bin_freqs())


@dataclass
class PreprocessedSpectrogram:
    """dBA-limited, zero-shifted spectrogram with frame bookkeeping.

    ``values`` is (L', K) and non-negative; ``kept_frames`` maps rows back
    to frame indices of the source spectrogram; ``thr`` is the limiting
    threshold, always ``p_dba - 20``.
    """

    values: np.ndarray
    kept_frames: np.ndarray
    thr: float
    p_dba: float
    config: StftConfig

    @property
    def num_frames(self) -> int:
        return self.values.shape[0]


def to_dba(pow_spec: PowerSpectrogram) -> np.ndarray:
    """Convert bin powers to A-weighted dB, flooring zeros before the log."""
    floored = np.maximum(pow_spec.power, POWER_FLOOR)
    return 10.0 * np.log10(floored) + a_weight_table(pow_spec.config)[None, :]


def compute_threshold(dba: np.ndarray) -> tuple[float, float]:
    """Overall level of a dBA spectrogram and the limiting threshold.

    The level is the dB value of the mean linear power across all bins and
    frames; the threshold sits THRESHOLD_DROP_DB below it.
    """
    if dba.shape[0] < 1:
        raise ValueError("need at least one frame")
    p_dba = 10.0 * np.log10(np.mean(10.0 ** (dba / 10.0)))
    return float(p_dba), float(p_dba - THRESHOLD_DROP_DB)


def limit_shift(dba: np.ndarray, thr: float) -> np.ndarray:
    """Limit values at ``thr`` and shift so the result is non-negative."""
    return np.maximum(dba, thr) - thr


def discard_silent_frames(
    nout_plus: np.ndarray, nin_plus: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Drop frames that are all-zero in the processed signal from both signals.

    Returns (nout_kept, nin_kept, kept_indices); kept_indices are the
    surviving original frame numbers, in order.
    """
    if nout_plus.shape[0] != nin_plus.shape[0]:
        raise ValueError("frame counts differ")
    kept = np.flatnonzero((nout_plus > 0).any(axis=1))
    if kept.size == 0:
        raise EmptyAfterPreprocessing("every frame is silent after limiting")
    return nout_plus[kept], nin_plus[kept], kept


def preprocess_pair(
    nin_pow: PowerSpectrogram, nout_pow: PowerSpectrogram
) -> tuple[PreprocessedSpectrogram, PreprocessedSpectrogram]:
    """Full pre-processing chain for an unprocessed/processed pair.

    The threshold comes from the processed signal and is applied to both;
    frame discarding is synchronized so rows stay aligned.
    """
    if nin_pow.power.shape != nout_pow.power.shape:
        raise ValueError("spectrogram shapes differ")
    dba_out = to_dba(nout_pow)
    dba_in = to_dba(nin_pow)
    p_dba, thr = compute_threshold(dba_out)
    out_kept, in_kept, kept = discard_silent_frames(
        limit_shift(dba_out, thr), limit_shift(dba_in, thr)
    )
    cfg = nout_pow.config
    return (
        PreprocessedSpectrogram(in_kept, kept, thr, p_dba, cfg),
        PreprocessedSpectrogram(out_kept, kept, thr, p_dba, cfg),
    )


@dataclass(frozen=True)
class SubBandLayout:
    """Sub-band edges in Hz; a bin belongs to a band when low < f <= high."""

    bands: tuple = DEFAULT_BANDS

    def __post_init__(self):
        prev_high = -np.inf
        for low, high in self.bands:
            if low >= high:
                raise ValueError(f"band ({low}, {high}] is empty")
            if low < prev_high:
                raise ValueError("bands overlap")
            prev_high = high

    @property
    def num_bands(self) -> int:
        return len(self.bands)


def band_bins(layout: SubBandLayout, cfg: StftConfig) -> list[np.ndarray]:
    """Bin index sets per band; bins outside every band belong to none."""
    freqs = cfg.bin_freqs()
    sets = []
    for low, high in layout.bands:
        idx = np.flatnonzero((freqs > low) & (freqs <= high))
        if idx.size < 2:
            raise DegenerateBand(f"band ({low}, {high}] Hz holds {idx.size} bins")
        sets.append(idx)
    return sets
