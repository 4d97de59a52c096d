"""Deterministic synthetic audio for experiments and tests.

Real program material for response experiments is not bundled, so this
module builds a small set of caricatures covering the texture axes that
matter to spectral-kurtosis measures: sparse tonal, dense tonal, noisy,
transient, and speech-like. Every generator is a pure function of its
seed.
"""

from __future__ import annotations

import numpy as np

from .audio_io import ANALYSIS_RATE, AudioBuffer

DEFAULT_PEAK = 0.5


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def _finish(x: np.ndarray, sample_rate: int, peak: float = DEFAULT_PEAK) -> AudioBuffer:
    top = np.max(np.abs(x))
    if top > 0:
        x = x * (peak / top)
    return AudioBuffer(np.asarray(x, dtype=np.float64)[None, :], sample_rate)


def sine(
    freq: float,
    duration: float = 10.0,
    sample_rate: int = ANALYSIS_RATE,
    amplitude: float = DEFAULT_PEAK,
) -> AudioBuffer:
    t = np.arange(int(round(duration * sample_rate))) / sample_rate
    return AudioBuffer(
        (amplitude * np.sin(2 * np.pi * freq * t))[None, :], sample_rate
    )


def bin_centered_sine(
    bin_index: int = 64,
    duration: float = 10.0,
    sample_rate: int = ANALYSIS_RATE,
    dft_len: int = 2048,
) -> AudioBuffer:
    """Sinusoid whose frequency falls exactly on one analysis bin."""
    return sine(bin_index * sample_rate / dft_len, duration, sample_rate)


def arpeggio(
    duration: float = 10.0, sample_rate: int = ANALYSIS_RATE, seed: int = 11
) -> AudioBuffer:
    """Harp-like plucked arpeggio: sparse lines with long decays."""
    rng = _rng(seed)
    n = int(round(duration * sample_rate))
    x = np.zeros(n)
    pattern = [220.0, 277.18, 329.63, 440.0, 554.37, 659.26, 880.0, 659.26,
               554.37, 440.0, 329.63, 277.18]
    note_len = 0.125  # 8 notes per second
    ring = int(1.2 * sample_rate)  # decay tail spills over following notes
    t = np.arange(ring) / sample_rate
    env = np.exp(-t / 0.35) * np.minimum(t / 0.005, 1.0)
    for i in range(int(duration / note_len)):
        f = pattern[i % len(pattern)] * 2 ** (rng.uniform(-5, 5) / 1200)
        tone = np.zeros(ring)
        for h in range(1, 7):
            tone += h**-1.5 * np.sin(2 * np.pi * h * f * t + rng.uniform(0, 2 * np.pi))
        start = int(i * note_len * sample_rate)
        seg = min(ring, n - start)
        if seg <= 0:
            break
        x[start : start + seg] += (tone * env)[:seg]
    return _finish(x, sample_rate)


def speech_like(
    duration: float = 10.0, sample_rate: int = ANALYSIS_RATE, seed: int = 22
) -> AudioBuffer:
    """Voiced pseudo-speech: drifting pitch, moving formants, syllable gating."""
    rng = _rng(seed)
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate

    def drift(rate_hz, lo, hi):
        # piecewise-linear random contour, a few control points per second
        knots = max(int(duration * rate_hz) + 2, 2)
        return np.interp(t, np.linspace(0, duration, knots), rng.uniform(lo, hi, knots))

    f0 = drift(3.0, 100.0, 180.0)
    phase = 2 * np.pi * np.cumsum(f0) / sample_rate
    f1, f2 = drift(2.5, 300.0, 850.0), drift(2.5, 900.0, 2300.0)
    x = np.zeros(n)
    for h in range(1, 34):  # partials up to ~3.4 kHz at the lowest pitch
        fh = h * f0
        gain = (
            1.0 / (1.0 + ((fh - f1) / 120.0) ** 2)
            + 0.6 / (1.0 + ((fh - f2) / 220.0) ** 2)
            + 0.03
        ) / h**0.5
        x += gain * np.sin(h * phase)
    syllables = np.clip(np.sin(2 * np.pi * drift(0.5, 3.0, 5.0) * t) * 3.0, 0.0, 1.0)
    pauses = (drift(0.8, 0.0, 1.0) > 0.25).astype(float)
    x *= syllables * pauses
    x += 0.002 * rng.standard_normal(n)  # breath floor
    return _finish(x, sample_rate)


def pink_noise(
    duration: float = 10.0, sample_rate: int = ANALYSIS_RATE, seed: int = 33
) -> AudioBuffer:
    """1/f-shaped Gaussian noise, stationary."""
    rng = _rng(seed)
    n = int(round(duration * sample_rate))
    spectrum = np.fft.rfft(rng.standard_normal(n))
    f = np.fft.rfftfreq(n, 1.0 / sample_rate)
    f[0] = f[1]
    return _finish(np.fft.irfft(spectrum / np.sqrt(f), n), sample_rate)


def tonal_pad(
    duration: float = 10.0, sample_rate: int = ANALYSIS_RATE, seed: int = 44
) -> AudioBuffer:
    """Sustained detuned chord cluster: dense stationary line spectrum."""
    rng = _rng(seed)
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    x = np.zeros(n)
    chord = [130.81, 196.0, 261.63, 329.63, 392.0, 523.25, 659.26]
    for f in chord:
        for h in (1, 2, 3):
            for _ in range(3):  # detuned unison voices give slow beating
                fd = h * f * 2 ** (rng.uniform(-4, 4) / 1200)
                am = 1.0 + 0.2 * np.sin(2 * np.pi * rng.uniform(0.1, 0.3) * t
                                        + rng.uniform(0, 2 * np.pi))
                x += h**-2.0 * am * np.sin(2 * np.pi * fd * t + rng.uniform(0, 2 * np.pi))
    return _finish(x, sample_rate)


def noise_bursts(
    duration: float = 10.0, sample_rate: int = ANALYSIS_RATE, seed: int = 55
) -> AudioBuffer:
    """Percussive broadband hits over a quiet noise floor."""
    rng = _rng(seed)
    n = int(round(duration * sample_rate))
    base = pink_noise(duration, sample_rate, seed + 1).samples[0]
    env = np.full(n, 0.01)
    pos = 0.0
    tail = np.exp(-np.arange(int(0.12 * sample_rate)) / (0.03 * sample_rate))
    while pos < duration:
        start = int(pos * sample_rate)
        seg = min(tail.size, n - start)
        env[start : start + seg] = np.maximum(env[start : start + seg], tail[:seg])
        pos += rng.uniform(0.25, 0.6)
    return _finish(base * env, sample_rate)


def default_response_test_set(
    duration: float = 10.0, sample_rate: int = ANALYSIS_RATE
) -> list[tuple[str, AudioBuffer]]:
    """Named, seeded items spanning tonal, noisy, transient and speech-like."""
    return [
        ("arpeggio", arpeggio(duration, sample_rate)),
        ("speech", speech_like(duration, sample_rate)),
        ("pink", pink_noise(duration, sample_rate)),
        ("pad", tonal_pad(duration, sample_rate)),
        ("bursts", noise_bursts(duration, sample_rate)),
    ]
