"""Perceptually weighted kurtosis-ratio measure on auditory sub-bands.

The processed/unprocessed pair is converted to A-weighted dB, limited at a
threshold 20 dB under the overall level of the processed signal and shifted
to zero. Silent frames are dropped, the spectrum is split into three fixed
sub-bands, and a per-frame absolute log-kurtosis ratio is computed per band,
limited at 0.5. Frame energies in the processed signal weight the temporal
mean; the reported value comes from the band where distortion dominates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .audio_io import AudioBuffer
from .errors import EmptyAfterPreprocessing, InvalidChannel, NotComputable
from .kurtosis import kurtosis_series
from .measures import (
    BAND_RATIO_MAX,
    MEASURE_IDS,
    MeasureResult,
    delta_kurt,
    delta_kurt_lim,
    delta_kurt_w,
)
from .prepro import PreprocessedSpectrogram, SubBandLayout, band_bins, preprocess_pair
from .stft import PowerSpectrogram, StftConfig, analyze, power

PI_SCALE = 100.0 / BAND_RATIO_MAX  # raw range [0, 0.5] onto [0, 100]


@dataclass
class BandAnalysis:
    """Per-frame measure values and energy weights for one sub-band.

    ``band`` is 1-based. ``dk`` holds the limited absolute log-kurtosis
    ratio per kept frame, NaN where either kurtosis is undefined; those
    frames are excluded from both sums.
    """

    band: int
    dk: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def valid(self) -> np.ndarray:
        return ~np.isnan(self.dk)

    @property
    def weight_sum(self) -> float:
        return float(self.weights[self.valid].sum())

    @property
    def selection_score(self) -> float:
        v = self.valid
        return float((self.weights[v] * self.dk[v]).sum())


def band_energy_weight(frame: np.ndarray, bins: np.ndarray) -> float:
    """Energy weight of one frame: dB of the mean linear power over the band."""
    return float(10.0 * np.log10(np.mean(10.0 ** (frame[bins] / 10.0))))


def band_delta_kurt(
    in_frame: np.ndarray, out_frame: np.ndarray, bins: np.ndarray
) -> float:
    """Limited absolute log-kurtosis ratio of one frame over one band.

    NaN when either band spectrum has zero variance.
    """
    kin = kurtosis_series(in_frame[None, bins])
    kout = kurtosis_series(out_frame[None, bins])
    if not (kin.valid[0] and kout.valid[0]):
        return float("nan")
    return min(abs(float(np.log(kout.values[0] / kin.values[0]))), BAND_RATIO_MAX)


def analyze_bands(
    in_pre: PreprocessedSpectrogram,
    out_pre: PreprocessedSpectrogram,
    layout: SubBandLayout = SubBandLayout(),
) -> list[BandAnalysis]:
    """Per-band frame measures and weights for a preprocessed pair."""
    analyses = []
    for b, bins in enumerate(band_bins(layout, out_pre.config), start=1):
        kin = kurtosis_series(in_pre.values[:, bins])
        kout = kurtosis_series(out_pre.values[:, bins])
        both = kin.valid & kout.valid
        dk = np.full(kin.values.shape, np.nan)
        dk[both] = np.minimum(
            np.abs(np.log(kout.values[both] / kin.values[both])), BAND_RATIO_MAX
        )
        lin = 10.0 ** (out_pre.values[:, bins] / 10.0)
        weights = 10.0 * np.log10(lin.mean(axis=1))
        analyses.append(BandAnalysis(b, dk, weights))
    return analyses


def select_band(analyses: list[BandAnalysis]) -> int:
    """Pick the band whose weighted distortion sum is largest.

    Ties go to the lowest band index that still has a usable frame; a band
    without one cannot carry the measure. With no usable frame anywhere the
    measure is undefined.
    """
    best = max(a.selection_score for a in analyses)
    tied = [a for a in analyses if a.selection_score == best]
    for a in tied:
        if a.valid.any():
            return a.band
    raise NotComputable("no sub-band frame with defined kurtosis in both signals")


def pi_from_power(
    nin_pow: PowerSpectrogram,
    nout_pow: PowerSpectrogram,
    layout: SubBandLayout = SubBandLayout(),
    include_trace: bool = False,
) -> MeasureResult:
    """Perceptually weighted measure from a pair of power spectrograms."""
    in_pre, out_pre = preprocess_pair(nin_pow, nout_pow)
    analyses = analyze_bands(in_pre, out_pre, layout)
    chosen = analyses[select_band(analyses) - 1]
    raw = chosen.selection_score / chosen.weight_sum
    return MeasureResult(
        "delta_kurt_pi",
        raw,
        raw * PI_SCALE,
        selected_band=chosen.band,
        frame_trace=chosen.dk if include_trace else None,
        n_frames=int(chosen.valid.sum()),
    )


def _trim_pair(nin: AudioBuffer, nout: AudioBuffer) -> tuple[AudioBuffer, AudioBuffer]:
    if nin.num_channels != nout.num_channels:
        raise InvalidChannel(
            f"channel counts differ: {nin.num_channels} vs {nout.num_channels}"
        )
    if nin.sample_rate != nout.sample_rate:
        raise ValueError("sample rates differ")
    n = min(nin.num_samples, nout.num_samples)
    if n < nin.num_samples:
        nin = AudioBuffer(nin.samples[:, :n], nin.sample_rate)
    if n < nout.num_samples:
        nout = AudioBuffer(nout.samples[:, :n], nout.sample_rate)
    return nin, nout


def _worst_channel(results: list[MeasureResult]) -> MeasureResult:
    return max(results, key=lambda r: r.scaled)


def delta_kurt_pi(
    nin: AudioBuffer,
    nout: AudioBuffer,
    config: StftConfig | None = None,
    layout: SubBandLayout = SubBandLayout(),
    include_trace: bool = False,
) -> MeasureResult:
    """Perceptually weighted measure for an unprocessed/processed pair.

    Channels are paired up, trailing samples of the longer signal are
    dropped, and the worst (highest-scoring) channel is reported.
    """
    nin, nout = _trim_pair(nin, nout)
    cfg = config or StftConfig(sample_rate=nin.sample_rate)
    results = []
    for ch in range(nin.num_channels):
        pin = power(analyze(nin.channel(ch), cfg))
        pout = power(analyze(nout.channel(ch), cfg))
        results.append(pi_from_power(pin, pout, layout, include_trace))
    return _worst_channel(results)


def measure_pair(
    nin: AudioBuffer,
    nout: AudioBuffer,
    measure_ids: tuple[str, ...] = MEASURE_IDS,
    config: StftConfig | None = None,
    layout: SubBandLayout = SubBandLayout(),
    include_trace: bool = False,
) -> tuple[dict[str, MeasureResult], dict[str, str]]:
    """Run several measures on one pair, sharing the spectral analysis.

    Returns (results, failures); a measure that is undefined for this pair
    lands in ``failures`` with the reason instead of aborting the rest.
    Multichannel input is reduced per measure to its worst channel.
    """
    unknown = set(measure_ids) - set(MEASURE_IDS)
    if unknown:
        raise ValueError(f"unknown measure ids: {sorted(unknown)}")
    nin, nout = _trim_pair(nin, nout)
    cfg = config or StftConfig(sample_rate=nin.sample_rate)
    spectra = []
    for ch in range(nin.num_channels):
        spectra.append(
            (power(analyze(nin.channel(ch), cfg)), power(analyze(nout.channel(ch), cfg)))
        )

    baselines = {
        "delta_kurt": delta_kurt,
        "delta_kurt_lim": delta_kurt_lim,
        "delta_kurt_w": delta_kurt_w,
    }
    results: dict[str, MeasureResult] = {}
    failures: dict[str, str] = {}
    for mid in measure_ids:
        per_channel = []
        reason = None
        for pin, pout in spectra:
            try:
                if mid == "delta_kurt_pi":
                    per_channel.append(pi_from_power(pin, pout, layout, include_trace))
                else:
                    per_channel.append(baselines[mid](pin, pout, include_trace))
            except (NotComputable, EmptyAfterPreprocessing) as exc:
                reason = str(exc)
        if per_channel:
            results[mid] = _worst_channel(per_channel)
        else:
            failures[mid] = reason or "not computable"
    return results, failures
