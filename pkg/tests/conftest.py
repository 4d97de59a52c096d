import numpy as np
import pytest

from musinoise import AudioBuffer


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def noise_buffer(rng):
    # 1.5 s of white noise, enough for ~138 frames at the default hop
    return AudioBuffer(0.3 * rng.standard_normal((1, 72000)), 48000)


@pytest.fixture
def tone_buffer():
    t = np.arange(72000) / 48000
    x = 0.4 * np.sin(2 * np.pi * 441.0 * t) + 0.1 * np.sin(2 * np.pi * 1763.0 * t)
    return AudioBuffer(x[None, :], 48000)
