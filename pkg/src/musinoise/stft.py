"""Short-time Fourier analysis and overlap-add resynthesis.

Fixed configuration family: sine window, 50% overlap, DFT twice the window
length. The sine window is applied on both analysis and synthesis, and its
squared sum at half-window hop is exactly one, so a round trip reconstructs
the interior of the signal to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio_io import AudioBuffer
from .errors import TooShort


@dataclass(frozen=True)
class StftConfig:
    window_len: int = 1024
    hop: int = 512
    dft_len: int = 2048
    sample_rate: int = 48000

    def __post_init__(self):
        if self.window_len < 2 or self.window_len & (self.window_len - 1):
            raise ValueError("window_len must be a power of two")
        if self.hop != self.window_len // 2:
            raise ValueError("hop must be window_len / 2")
        if self.dft_len != 2 * self.window_len:
            raise ValueError("dft_len must be 2 * window_len")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def num_bins(self) -> int:
        return self.dft_len // 2 + 1

    def bin_freqs(self) -> np.ndarray:
        """Center frequency in Hz of each one-sided bin."""
        return np.arange(self.num_bins) * (self.sample_rate / self.dft_len)

    def window(self) -> np.ndarray:
        n = np.arange(self.window_len)
        return np.sin(np.pi * (n + 0.5) / self.window_len)


def config_for_window(window_len: int, sample_rate: int = 48000) -> StftConfig:
    """Build the standard config (50% hop, double-length DFT) for a window size."""
    return StftConfig(window_len, window_len // 2, 2 * window_len, sample_rate)


@dataclass
class ComplexSpectrogram:
    """One-sided complex STFT, frames-first: shape (L, K)."""

    frames: np.ndarray
    config: StftConfig

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]


@dataclass
class PowerSpectrogram:
    """Per-bin squared magnitudes, shape (L, K), all values >= 0."""

    power: np.ndarray
    config: StftConfig

    @property
    def num_frames(self) -> int:
        return self.power.shape[0]


def analyze(buf: AudioBuffer, cfg: StftConfig = StftConfig()) -> ComplexSpectrogram:
    """Windowed one-sided STFT of a single-channel buffer.

    Frame l covers samples [l*hop, l*hop + window_len); trailing samples
    that do not fill a window are dropped. Each frame is zero-padded to
    dft_len before the transform.
    """
    if buf.num_channels != 1:
        raise ValueError("analyze expects a single-channel buffer")
    x = buf.samples[0]
    if len(x) < cfg.window_len:
        raise TooShort(f"{len(x)} samples < window of {cfg.window_len}")

    n_frames = (len(x) - cfg.window_len) // cfg.hop + 1
    idx = np.arange(cfg.window_len)[None, :] + cfg.hop * np.arange(n_frames)[:, None]
    frames = x[idx] * cfg.window()[None, :]
    spec = np.fft.rfft(frames, n=cfg.dft_len, axis=1)
    return ComplexSpectrogram(spec, cfg)


def power(spec: ComplexSpectrogram) -> PowerSpectrogram:
    """Elementwise squared magnitude of the complex bins."""
    return PowerSpectrogram(np.abs(spec.frames) ** 2, spec.config)


def synthesize(spec: ComplexSpectrogram) -> AudioBuffer:
    """Overlap-add resynthesis: inverse DFT, truncate to the window, window again.

    Output spans exactly the samples the analysis frames covered,
    (L-1)*hop + window_len; the first and last half windows carry the usual
    fade from incomplete overlap.
    """
    cfg = spec.config
    frames = np.fft.irfft(spec.frames, n=cfg.dft_len, axis=1)[:, : cfg.window_len]
    frames = frames * cfg.window()[None, :]

    n_frames = frames.shape[0]
    out = np.zeros((n_frames - 1) * cfg.hop + cfg.window_len if n_frames else 0)
    for l in range(n_frames):
        out[l * cfg.hop : l * cfg.hop + cfg.window_len] += frames[l]
    return AudioBuffer(out[None, :], cfg.sample_rate)
