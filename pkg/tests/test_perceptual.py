import numpy as np
import pytest

from musinoise import (
    AudioBuffer,
    DistortionSpec,
    InvalidChannel,
    StftConfig,
    SubBandLayout,
    analyze,
    delta_kurt_pi,
    distort_audio,
    measure_pair,
    pi_from_power,
    power,
    preprocess_pair,
)
from musinoise.perceptual import (
    BandAnalysis,
    analyze_bands,
    band_delta_kurt,
    band_energy_weight,
    select_band,
)
from musinoise.signals import pink_noise, sine, speech_like

CFG = StftConfig()


def test_band_energy_weight_frozen():
    frame = np.array([10.0, 10.0, 0.0])
    assert band_energy_weight(frame, np.array([0, 1])) == pytest.approx(10.0)
    # all-zero band: mean linear power 1 -> 0 dB
    assert band_energy_weight(frame, np.array([2])) == 0.0


def test_band_delta_kurt_clamped(rng):
    a = rng.gamma(0.4, size=300) + 0.01
    b = a.copy()
    b[rng.choice(300, 290, replace=False)] = 0.0  # extreme sparsification
    bins = np.arange(300)
    dk = band_delta_kurt(a, b, bins)
    assert dk == 0.5  # hit the per-frame limit
    assert band_delta_kurt(a, a, bins) == 0.0
    assert np.isnan(band_delta_kurt(np.full(300, 2.0), b, bins))


def test_select_band_prefers_weighted_distortion():
    good = BandAnalysis(1, np.array([0.1, 0.1]), np.array([1.0, 1.0]))
    loud = BandAnalysis(2, np.array([0.3, 0.3]), np.array([5.0, 5.0]))
    assert select_band([good, loud]) == 2


def test_select_band_tie_needs_usable_frames():
    empty = BandAnalysis(1, np.array([np.nan, np.nan]), np.array([1.0, 1.0]))
    usable = BandAnalysis(2, np.array([0.0, 0.0]), np.array([1.0, 1.0]))
    # scores tie at zero; the band with defined frames must win
    assert select_band([empty, usable]) == 2
    from musinoise import NotComputable

    with pytest.raises(NotComputable):
        select_band([empty])


def test_identity_zero_even_for_narrowband():
    # energy confined to the middle band: outer bands limit to constant
    # zero and carry no usable frames, yet identity must still be 0
    buf = sine(1000.0, duration=1.0)
    res = delta_kurt_pi(buf, buf)
    assert res.raw == 0.0
    assert res.scaled == 0.0
    assert res.selected_band in (1, 2, 3)


def test_pi_reacts_to_damage(tone_buffer):
    proc = distort_audio(tone_buffer, DistortionSpec(75.0, 5))
    ref = distort_audio(tone_buffer, DistortionSpec(0.0, 0))
    res = delta_kurt_pi(ref, proc)
    assert 0.0 <= res.raw <= 0.5
    assert 0.0 < res.scaled <= 100.0
    assert res.n_frames > 0


def test_pi_from_power_trace(noise_buffer):
    proc = distort_audio(noise_buffer, DistortionSpec(50.0, 3))
    pin = power(analyze(distort_audio(noise_buffer, DistortionSpec(0.0, 0)).channel(0)))
    pout = power(analyze(proc.channel(0)))
    res = pi_from_power(pin, pout, include_trace=True)
    assert res.frame_trace is not None
    valid = ~np.isnan(res.frame_trace)
    assert valid.sum() == res.n_frames
    assert (res.frame_trace[valid] <= 0.5).all()
    assert (res.frame_trace[valid] >= 0.0).all()


def test_analyze_bands_shapes(noise_buffer):
    pin = power(analyze(noise_buffer))
    in_pre, out_pre = preprocess_pair(pin, pin)
    analyses = analyze_bands(in_pre, out_pre)
    assert [a.band for a in analyses] == [1, 2, 3]
    for a in analyses:
        assert a.dk.shape == a.weights.shape == (in_pre.num_frames,)
        assert (a.weights >= 0).all()


def test_worst_channel_reported(rng):
    quiet = pink_noise(1.5, seed=8).samples[0]
    st = AudioBuffer(np.vstack([quiet, quiet]), 48000)
    proc = distort_audio(st, DistortionSpec(80.0, 2))
    # restore channel 0 so only channel 1 is damaged
    ref = distort_audio(st, DistortionSpec(0.0, 0))
    half = AudioBuffer(np.vstack([ref.samples[0], proc.samples[1]]), 48000)
    both = delta_kurt_pi(ref, half)
    ch1_only = delta_kurt_pi(
        AudioBuffer(ref.samples[1:2], 48000), AudioBuffer(half.samples[1:2], 48000)
    )
    assert both.scaled == ch1_only.scaled
    assert both.scaled > 1.0


def test_trim_to_shorter():
    a = sine(500.0, duration=1.0)
    b = AudioBuffer(a.samples[:, :-4000], 48000)
    res = delta_kurt_pi(a, b)
    assert res.raw == 0.0  # overlapping part is identical


def test_channel_and_rate_guards():
    mono = sine(500.0, duration=0.5)
    stereo = AudioBuffer(np.vstack([mono.samples, mono.samples]), 48000)
    with pytest.raises(InvalidChannel):
        delta_kurt_pi(mono, stereo)
    slow = AudioBuffer(mono.samples, 44100)
    with pytest.raises(ValueError):
        delta_kurt_pi(mono, slow)


def test_measure_pair_full_set(tone_buffer):
    proc = distort_audio(tone_buffer, DistortionSpec(60.0, 4))
    ref = distort_audio(tone_buffer, DistortionSpec(0.0, 0))
    results, failures = measure_pair(ref, proc)
    assert failures == {}
    assert set(results) == {
        "delta_kurt",
        "delta_kurt_lim",
        "delta_kurt_w",
        "delta_kurt_pi",
    }
    assert results["delta_kurt_pi"].selected_band is not None
    assert results["delta_kurt"].selected_band is None


def test_measure_pair_partial_failure():
    silent = AudioBuffer(np.zeros((1, 48000)), 48000)
    results, failures = measure_pair(silent, silent, ("delta_kurt", "delta_kurt_pi"))
    # flat zero spectrum has no spectral variance for the plain measure,
    # but the A-weighting curve keeps the sub-band measure defined
    assert "delta_kurt" in failures
    assert results["delta_kurt_pi"].scaled == 0.0


def test_measure_pair_unknown_id(tone_buffer):
    with pytest.raises(ValueError):
        measure_pair(tone_buffer, tone_buffer, ("nope",))


def test_custom_layout(tone_buffer):
    proc = distort_audio(tone_buffer, DistortionSpec(60.0, 4))
    ref = distort_audio(tone_buffer, DistortionSpec(0.0, 0))
    two = SubBandLayout(((50.0, 2000.0), (2000.0, 16000.0)))
    res = delta_kurt_pi(ref, proc, layout=two)
    assert res.selected_band in (1, 2)
