import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from musinoise import alpha_weights, frame_kurtosis, kurtosis_series
from musinoise.kurtosis import weighted_frame_kurtosis, weighted_kurtosis_series


def naive_kurtosis(values):
    """Straight-line fourth-over-squared-second central moment, fsum arithmetic."""
    n = len(values)
    mean = math.fsum(values) / n
    m2 = math.fsum((v - mean) ** 2 for v in values) / n
    if m2 == 0.0:
        return float("nan")
    m4 = math.fsum((v - mean) ** 4 for v in values) / n
    return m4 / (m2 * m2)


def test_frozen_values():
    assert frame_kurtosis([0.0, 0.0, 0.0, 12.0]) == pytest.approx(1701 / 729)
    assert frame_kurtosis([1.0, 2.0, 3.0, 4.0]) == pytest.approx(1.64)
    assert math.isnan(frame_kurtosis([5.0, 5.0, 5.0]))


def test_rejects_tiny_frames():
    with pytest.raises(ValueError):
        frame_kurtosis([1.0])
    with pytest.raises(ValueError):
        kurtosis_series(np.ones((3, 1)))


def test_matches_naive_oracle():
    rng = np.random.default_rng(99)
    for _ in range(300):
        k = int(rng.integers(4, 2049))
        frame = rng.gamma(0.7, size=k) * rng.uniform(1e-6, 1e6)
        got = frame_kurtosis(frame)
        want = naive_kurtosis(frame.tolist())
        assert got == pytest.approx(want, rel=1e-9)


def test_series_matches_scalar(rng):
    values = rng.standard_normal((40, 129)) ** 2
    values[7] = 3.25  # one constant frame
    series = kurtosis_series(values)
    assert not series.valid[7] and math.isnan(series.values[7])
    for i in range(40):
        if i == 7:
            continue
        assert series.valid[i]
        assert series.values[i] == pytest.approx(frame_kurtosis(values[i]), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=64),
    st.floats(1e-3, 1e3),
    st.floats(-1e3, 1e3),
)
def test_scale_shift_invariance(xs, a, b):
    base = frame_kurtosis(xs)
    moved = frame_kurtosis([a * v + b for v in xs])
    if math.isnan(base):
        # affine maps preserve constancy
        assert math.isnan(moved)
    else:
        assert moved == pytest.approx(base, rel=1e-9, abs=1e-9)
        assert base >= 1.0 - 1e-12  # m4 >= m2^2 always


def test_alpha_weights():
    values = np.array([[2.0, 0.0, 8.0], [4.0, 0.0, 0.0]])
    alpha = alpha_weights(values)
    np.testing.assert_allclose(alpha, [1 / 3, 0.0, 1 / 4])


def test_weighted_matches_naive(rng):
    values = rng.gamma(0.5, size=(30, 200))
    values[:, 17] = 0.0  # silent bin stays silent after weighting
    alpha = alpha_weights(values)
    series = weighted_kurtosis_series(values, alpha)
    for i in range(30):
        want = naive_kurtosis((values[i] * alpha).tolist())
        assert series.values[i] == pytest.approx(want, rel=1e-9)
    one = weighted_frame_kurtosis(values[4], alpha)
    assert one == pytest.approx(series.values[4], rel=1e-12)


def test_weighting_equalizes_levels(rng):
    # per-bin gains are undone by the reciprocal-mean weights when the
    # underlying rows are level-scaled copies
    base = rng.gamma(0.6, size=(50, 64))
    gains = rng.uniform(0.1, 10.0, size=64)
    scaled = base * gains[None, :]
    k_base = weighted_kurtosis_series(base, alpha_weights(base))
    k_scaled = weighted_kurtosis_series(scaled, alpha_weights(scaled))
    np.testing.assert_allclose(k_scaled.values, k_base.values, rtol=1e-9)
