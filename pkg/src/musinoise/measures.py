"""Log-kurtosis-ratio measures comparing processed to unprocessed audio.

Each baseline averages the per-frame spectral kurtosis over time for both
signals and takes the natural log of the processed/unprocessed ratio. The
weighted variant first equalizes per-bin levels. Raw values are clamped
and rescaled to [0, 100] with the fixed ranges used in the controlled
distortion evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotComputable
from .kurtosis import alpha_weights, kurtosis_series, weighted_kurtosis_series
from .stft import PowerSpectrogram

MEASURE_IDS = ("delta_kurt", "delta_kurt_lim", "delta_kurt_w", "delta_kurt_pi")

DELTA_KURT_MAX = 1.4  # clamp range for rescaling delta_kurt to [0, 100]
DELTA_KURT_W_MAX = 2.2  # same for the weighted variant
BAND_RATIO_MAX = 0.5  # per-frame limit of the sub-band measure


@dataclass
class MeasureResult:
    measure_id: str
    raw: float
    scaled: float
    selected_band: int | None = None
    frame_trace: np.ndarray | None = field(default=None, repr=False)
    n_frames: int = 0


def rescale(raw: float, upper: float) -> float:
    """Clamp to [0, upper] and map linearly onto [0, 100]."""
    return float(np.clip(raw, 0.0, upper) / upper * 100.0)


def _check_pair(nin: PowerSpectrogram, nout: PowerSpectrogram) -> None:
    if nin.power.shape != nout.power.shape:
        raise ValueError("spectrogram shapes differ")


def _log_mean_ratio(kin, kout) -> float:
    """ln of the ratio of the two temporal means, skipping invalid frames."""
    if not kin.valid.any() or not kout.valid.any():
        raise NotComputable("no frame with nonzero spectral variance")
    mean_in = kin.values[kin.valid].mean()
    mean_out = kout.values[kout.valid].mean()
    return float(np.log(mean_out / mean_in))


def _trace(kin, kout) -> np.ndarray:
    both = kin.valid & kout.valid
    t = np.full(kin.values.shape, np.nan)
    t[both] = np.log(kout.values[both] / kin.values[both])
    return t


def delta_kurt(
    nin: PowerSpectrogram, nout: PowerSpectrogram, include_trace: bool = False
) -> MeasureResult:
    """Plain log-kurtosis ratio of the two power spectrograms."""
    _check_pair(nin, nout)
    kin = kurtosis_series(nin.power)
    kout = kurtosis_series(nout.power)
    raw = _log_mean_ratio(kin, kout)
    return MeasureResult(
        "delta_kurt",
        raw,
        rescale(raw, DELTA_KURT_MAX),
        frame_trace=_trace(kin, kout) if include_trace else None,
        n_frames=nin.num_frames,
    )


def delta_kurt_lim(
    nin: PowerSpectrogram, nout: PowerSpectrogram, include_trace: bool = False
) -> MeasureResult:
    """As delta_kurt with negative values (kurtosis decreases) floored to zero."""
    res = delta_kurt(nin, nout, include_trace)
    raw = max(res.raw, 0.0)
    return MeasureResult(
        "delta_kurt_lim",
        raw,
        rescale(raw, DELTA_KURT_MAX),
        frame_trace=res.frame_trace,
        n_frames=res.n_frames,
    )


def delta_kurt_w(
    nin: PowerSpectrogram, nout: PowerSpectrogram, include_trace: bool = False
) -> MeasureResult:
    """Log-kurtosis ratio with per-bin level equalization.

    Each signal is weighted by the reciprocal of its own per-bin temporal
    mean before the kurtosis is taken.
    """
    _check_pair(nin, nout)
    kin = weighted_kurtosis_series(nin.power, alpha_weights(nin.power))
    kout = weighted_kurtosis_series(nout.power, alpha_weights(nout.power))
    raw = _log_mean_ratio(kin, kout)
    return MeasureResult(
        "delta_kurt_w",
        raw,
        rescale(raw, DELTA_KURT_W_MAX),
        frame_trace=_trace(kin, kout) if include_trace else None,
        n_frames=nin.num_frames,
    )
