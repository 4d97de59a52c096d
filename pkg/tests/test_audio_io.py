import struct

import numpy as np
import pytest

from musinoise import (
    AudioBuffer,
    CorruptFile,
    InvalidChannel,
    UnsupportedFormat,
    downmix_or_select,
    ingest,
    load_wav,
    resample,
    save_wav,
)


def wav_bytes(
    data: bytes,
    codec=1,
    channels=1,
    rate=48000,
    bits=16,
    magic=b"RIFF",
    wave=b"WAVE",
    fmt_body=None,
):
    if fmt_body is None:
        block = channels * bits // 8
        fmt_body = struct.pack(
            "<HHIIHH", codec, channels, rate, rate * block, block, bits
        )
    chunks = b"fmt " + struct.pack("<I", len(fmt_body)) + fmt_body
    chunks += b"data" + struct.pack("<I", len(data)) + data
    return magic + struct.pack("<I", 4 + len(chunks)) + wave + chunks


def test_round_trip_subtypes(tmp_path, rng):
    x = np.clip(rng.standard_normal((2, 1000)) * 0.3, -1, 1)
    buf = AudioBuffer(x, 44100)
    for subtype, tol in [
        ("pcm16", 2**-15),
        ("pcm24", 2**-23),
        ("pcm32", 2**-30),
        ("float32", 1e-7),
        ("float64", 0.0),
    ]:
        path = tmp_path / f"t_{subtype}.wav"
        save_wav(buf, path, subtype=subtype)
        back = load_wav(path)
        assert back.sample_rate == 44100
        assert back.samples.shape == (2, 1000)
        np.testing.assert_allclose(back.samples, x, atol=tol)


def test_pcm24_full_scale_exact(tmp_path):
    # sample words assembled from byte triples with sign extension
    frames = b"\x00\x00\x80" + b"\xff\xff\x7f" + b"\x00\x00\x00"
    path = tmp_path / "x.wav"
    path.write_bytes(wav_bytes(frames, bits=24))
    buf = load_wav(path)
    np.testing.assert_array_equal(
        buf.samples[0], [-1.0, (2**23 - 1) / 2**23, 0.0]
    )


def test_extensible_wrapper(tmp_path):
    sub_format = struct.pack("<H", 1) + b"\x00\x00" + bytes(
        [0x00, 0x00, 0x10, 0x00, 0x80, 0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71]
    )
    fmt_body = (
        struct.pack("<HHIIHH", 0xFFFE, 1, 48000, 96000, 2, 16)
        + struct.pack("<HHI", 22, 16, 0x4)
        + sub_format
    )
    path = tmp_path / "ext.wav"
    path.write_bytes(wav_bytes(struct.pack("<h", 16384), fmt_body=fmt_body))
    np.testing.assert_allclose(load_wav(path).samples[0], [0.5])


def test_zero_length_data(tmp_path):
    path = tmp_path / "empty.wav"
    path.write_bytes(wav_bytes(b"", channels=2))
    buf = load_wav(path)
    assert buf.samples.shape == (2, 0)
    assert buf.duration == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"magic": b"RIFX"},
        {"wave": b"AIFF"},
    ],
)
def test_bad_magic(tmp_path, kwargs):
    path = tmp_path / "bad.wav"
    path.write_bytes(wav_bytes(b"\x00\x00", **kwargs))
    with pytest.raises(CorruptFile):
        load_wav(path)


def test_truncated_data_chunk(tmp_path):
    good = wav_bytes(b"\x00\x00" * 100)
    path = tmp_path / "trunc.wav"
    path.write_bytes(good[:-50])
    with pytest.raises(CorruptFile):
        load_wav(path)


def test_partial_frame_rejected(tmp_path):
    # 3 bytes of 16-bit stereo cannot hold a whole frame
    path = tmp_path / "part.wav"
    path.write_bytes(wav_bytes(b"\x00\x00\x00", channels=2))
    with pytest.raises(CorruptFile):
        load_wav(path)


def test_missing_chunks(tmp_path):
    header = b"RIFF" + struct.pack("<I", 4) + b"WAVE"
    path = tmp_path / "nochunks.wav"
    path.write_bytes(header)
    with pytest.raises(CorruptFile):
        load_wav(path)


@pytest.mark.parametrize("codec,bits", [(7, 8), (2, 4), (1, 8), (3, 16)])
def test_unsupported_codecs(tmp_path, codec, bits):
    path = tmp_path / "codec.wav"
    path.write_bytes(wav_bytes(b"\x00" * 8, codec=codec, bits=bits))
    with pytest.raises(UnsupportedFormat):
        load_wav(path)


def test_save_clips_integer_overrange(tmp_path):
    buf = AudioBuffer(np.array([[2.0, -2.0]]), 8000)
    path = tmp_path / "clip.wav"
    save_wav(buf, path, subtype="pcm16")
    back = load_wav(path)
    assert back.samples[0, 0] == (2**15 - 1) / 2**15
    assert back.samples[0, 1] == -1.0


def test_resample_identity():
    buf = AudioBuffer(np.ones((1, 100)), 48000)
    out = resample(buf, 48000)
    np.testing.assert_array_equal(out.samples, buf.samples)


def test_resample_sine_fidelity():
    # 1 kHz tone through 44.1k -> 48k; interior must stay a clean 1 kHz tone
    n_in = 44100
    t_in = np.arange(n_in) / 44100
    buf = AudioBuffer(0.5 * np.sin(2 * np.pi * 1000 * t_in)[None, :], 44100)
    out = resample(buf, 48000)
    assert out.sample_rate == 48000
    assert out.num_samples == 48000
    t_out = np.arange(out.num_samples) / 48000
    ideal = 0.5 * np.sin(2 * np.pi * 1000 * t_out)
    inner = slice(2000, -2000)
    err = out.samples[0][inner] - ideal[inner]
    err_db = 10 * np.log10(np.mean(err**2) / np.mean(ideal[inner] ** 2))
    assert err_db < -80


def test_resample_length_rational():
    buf = AudioBuffer(np.zeros((1, 12345)), 44100)
    out = resample(buf, 16000)
    assert out.num_samples == int(np.ceil(12345 * 16000 / 44100))


def test_downmix_and_select():
    buf = AudioBuffer(np.array([[1.0, 1.0], [0.0, 0.0]]), 48000)
    np.testing.assert_array_equal(
        downmix_or_select(buf, "mono-mix").samples, [[0.5, 0.5]]
    )
    np.testing.assert_array_equal(downmix_or_select(buf, 1).samples, [[0.0, 0.0]])
    with pytest.raises(InvalidChannel):
        downmix_or_select(buf, 2)
    with pytest.raises(InvalidChannel):
        buf.channel(-1)


def test_ingest_resamples(tmp_path, rng):
    buf = AudioBuffer(0.1 * rng.standard_normal((1, 32000)), 32000)
    path = tmp_path / "in.wav"
    save_wav(buf, path, subtype="float64")
    out = ingest(path)
    assert out.sample_rate == 48000
    assert out.num_samples == 48000
