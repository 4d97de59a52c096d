"""Objective measures of musical-noise artifacts in processed audio.

Kurtosis-based measures compare a processed signal against its unprocessed
reference on STFT power spectrograms. Besides three plain log-kurtosis-ratio
baselines, the package provides a perceptually weighted variant operating on
A-weighted, level-limited sub-bands, plus a controlled distortion generator
and an evaluation harness for response curves and correlation reports.
"""

from .audio_io import (
    ANALYSIS_RATE,
    AudioBuffer,
    downmix_or_select,
    ingest,
    load_wav,
    resample,
    save_wav,
)
from .distortion import DistortionSpec, distort_audio, zero_bins
from .errors import (
    CorruptFile,
    DegenerateBand,
    EmptyAfterPreprocessing,
    InvalidChannel,
    MusinoiseError,
    NotComputable,
    TargetAlwaysActive,
    TooShort,
    UnsupportedFormat,
)
from .evaluation import (
    ActivityMask,
    CorrelationReport,
    ResponseCurve,
    activity_from_reference,
    correlate_scores,
    kendall,
    load_activity_mask,
    pearson,
    response_score,
    run_response_experiment,
    run_response_matrix,
    select_noise_frames,
    write_response_csv,
)
from .kurtosis import alpha_weights, frame_kurtosis, kurtosis_series
from .measures import (
    MEASURE_IDS,
    MeasureResult,
    delta_kurt,
    delta_kurt_lim,
    delta_kurt_w,
)
from .perceptual import BandAnalysis, delta_kurt_pi, measure_pair, pi_from_power
from .prepro import (
    SubBandLayout,
    a_weighting_db,
    band_bins,
    discard_silent_frames,
    limit_shift,
    preprocess_pair,
    to_dba,
)
from .signals import default_response_test_set
from .stft import (
    ComplexSpectrogram,
    PowerSpectrogram,
    StftConfig,
    analyze,
    config_for_window,
    power,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYSIS_RATE",
    "ActivityMask",
    "AudioBuffer",
    "BandAnalysis",
    "ComplexSpectrogram",
    "CorrelationReport",
    "CorruptFile",
    "DegenerateBand",
    "DistortionSpec",
    "EmptyAfterPreprocessing",
    "InvalidChannel",
    "MEASURE_IDS",
    "MeasureResult",
    "MusinoiseError",
    "NotComputable",
    "PowerSpectrogram",
    "ResponseCurve",
    "StftConfig",
    "SubBandLayout",
    "TargetAlwaysActive",
    "TooShort",
    "UnsupportedFormat",
    "a_weighting_db",
    "activity_from_reference",
    "alpha_weights",
    "analyze",
    "band_bins",
    "config_for_window",
    "correlate_scores",
    "default_response_test_set",
    "delta_kurt",
    "delta_kurt_lim",
    "delta_kurt_pi",
    "delta_kurt_w",
    "discard_silent_frames",
    "distort_audio",
    "downmix_or_select",
    "frame_kurtosis",
    "ingest",
    "kendall",
    "kurtosis_series",
    "limit_shift",
    "load_activity_mask",
    "load_wav",
    "measure_pair",
    "pearson",
    "pi_from_power",
    "power",
    "preprocess_pair",
    "resample",
    "response_score",
    "run_response_experiment",
    "run_response_matrix",
    "save_wav",
    "select_noise_frames",
    "synthesize",
    "to_dba",
    "write_response_csv",
    "zero_bins",
]
