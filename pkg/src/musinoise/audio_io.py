"""WAV decoding/encoding, channel handling, and resampling to the analysis rate.

All measurement runs at 48 kHz; ``ingest`` is the one-stop loader that
decodes a file and resamples it there.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import firwin, resample_poly

from .errors import CorruptFile, InvalidChannel, UnsupportedFormat

ANALYSIS_RATE = 48000

_WAVE_FORMAT_PCM = 0x0001
_WAVE_FORMAT_IEEE_FLOAT = 0x0003
_WAVE_FORMAT_EXTENSIBLE = 0xFFFE

# taps per polyphase branch of the resampling filter; Kaiser beta trades
# stopband rejection (~100 dB) against transition width
_TAPS_PER_PHASE = 64
_KAISER_BETA = 10.0


@dataclass
class AudioBuffer:
    """Multichannel PCM audio, channels-first, nominal amplitude range [-1, 1].

    ``samples`` has shape (num_channels, num_samples); all channels share
    one length and one sample rate.
    """

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.atleast_2d(np.asarray(self.samples, dtype=np.float64))
        if self.samples.ndim != 2:
            raise ValueError("samples must be a (channels, n) array")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def num_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def num_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.num_samples / self.sample_rate

    def channel(self, index: int) -> "AudioBuffer":
        if not 0 <= index < self.num_channels:
            raise InvalidChannel(f"channel {index} of {self.num_channels}")
        return AudioBuffer(self.samples[index : index + 1].copy(), self.sample_rate)


def load_wav(path) -> AudioBuffer:
    """Decode a RIFF/WAVE file into an AudioBuffer.

    Supports integer PCM at 16/24/32 bit and IEEE float at 32/64 bit
    (plain or WAVE_FORMAT_EXTENSIBLE). Integer samples are scaled by
    2^(bits-1), so negative full scale maps to exactly -1.0.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[0:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise CorruptFile(f"{path}: not a RIFF/WAVE file")

    fmt_body = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        cid = raw[pos : pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body_start = pos + 8
        if body_start + size > len(raw):
            raise CorruptFile(f"{path}: chunk {cid!r} truncated")
        if cid == b"fmt ":
            fmt_body = raw[body_start : body_start + size]
        elif cid == b"data":
            data = raw[body_start : body_start + size]
        pos = body_start + size + (size & 1)  # chunks are word-aligned

    if fmt_body is None or data is None:
        raise CorruptFile(f"{path}: missing fmt or data chunk")
    if len(fmt_body) < 16:
        raise CorruptFile(f"{path}: fmt chunk too small")

    codec, channels, rate, _, block_align, bits = struct.unpack_from(
        "<HHIIHH", fmt_body, 0
    )
    if codec == _WAVE_FORMAT_EXTENSIBLE:
        # 16 base bytes + cbSize(2) + validbits(2) + mask(4), then the
        # sub-format GUID, which starts with the plain codec tag
        if len(fmt_body) < 26:
            raise CorruptFile(f"{path}: extensible fmt chunk too small")
        (codec,) = struct.unpack_from("<H", fmt_body, 24)

    if channels < 1 or rate <= 0:
        raise CorruptFile(f"{path}: implausible fmt fields")

    if codec == _WAVE_FORMAT_PCM:
        if bits not in (16, 24, 32):
            raise UnsupportedFormat(f"{path}: {bits}-bit integer PCM not supported")
    elif codec == _WAVE_FORMAT_IEEE_FLOAT:
        if bits not in (32, 64):
            raise UnsupportedFormat(f"{path}: {bits}-bit float not supported")
    else:
        raise UnsupportedFormat(f"{path}: codec 0x{codec:04x} not supported")

    bytes_per_sample = bits // 8
    frame_size = bytes_per_sample * channels
    if block_align not in (0, frame_size):
        raise CorruptFile(f"{path}: block align {block_align} != {frame_size}")
    if len(data) % frame_size != 0:
        raise CorruptFile(f"{path}: data chunk not a whole number of frames")
    n_frames = len(data) // frame_size

    if n_frames == 0:
        return AudioBuffer(np.zeros((channels, 0)), rate)

    if codec == _WAVE_FORMAT_IEEE_FLOAT:
        dtype = "<f4" if bits == 32 else "<f8"
        flat = np.frombuffer(data, dtype=dtype).astype(np.float64)
    elif bits == 16:
        flat = np.frombuffer(data, dtype="<i2").astype(np.float64) / 2.0**15
    elif bits == 32:
        flat = np.frombuffer(data, dtype="<i4").astype(np.float64) / 2.0**31
    else:  # 24-bit: assemble from byte triples, sign-extend
        b = np.frombuffer(data, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
        val = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
        val = (val ^ 0x800000) - 0x800000
        flat = val.astype(np.float64) / 2.0**23

    return AudioBuffer(flat.reshape(n_frames, channels).T.copy(), rate)


def save_wav(buf: AudioBuffer, path, subtype: str = "float32") -> None:
    """Write an AudioBuffer as a WAV file.

    ``subtype`` is one of pcm16, pcm24, pcm32, float32, float64. Integer
    subtypes clip to full scale; float subtypes are written verbatim, so a
    float round trip is sample-exact.
    """
    interleaved = np.ascontiguousarray(buf.samples.T)
    n_frames, channels = interleaved.shape

    if subtype == "float32":
        codec, bits = _WAVE_FORMAT_IEEE_FLOAT, 32
        payload = interleaved.astype("<f4").tobytes()
    elif subtype == "float64":
        codec, bits = _WAVE_FORMAT_IEEE_FLOAT, 64
        payload = interleaved.astype("<f8").tobytes()
    elif subtype in ("pcm16", "pcm24", "pcm32"):
        codec = _WAVE_FORMAT_PCM
        bits = int(subtype[3:])
        full = 2.0 ** (bits - 1)
        ints = np.clip(np.rint(interleaved * full), -full, full - 1).astype(np.int64)
        if bits == 16:
            payload = ints.astype("<i2").tobytes()
        elif bits == 32:
            payload = ints.astype("<i4").tobytes()
        else:
            u = ints.astype(np.int64) & 0xFFFFFF
            b = np.empty((u.size, 3), dtype=np.uint8)
            flat = u.ravel()
            b[:, 0] = flat & 0xFF
            b[:, 1] = (flat >> 8) & 0xFF
            b[:, 2] = (flat >> 16) & 0xFF
            payload = b.tobytes()
    else:
        raise ValueError(f"unknown subtype {subtype!r}")

    byte_rate = buf.sample_rate * channels * bits // 8
    block_align = channels * bits // 8
    fmt = struct.pack(
        "<HHIIHH", codec, channels, buf.sample_rate, byte_rate, block_align, bits
    )
    blob = b"WAVE"
    blob += b"fmt " + struct.pack("<I", len(fmt)) + fmt
    blob += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        blob += b"\x00"
    with open(path, "wb") as fh:
        fh.write(b"RIFF" + struct.pack("<I", len(blob)) + blob)


def resample(buf: AudioBuffer, target_rate: int) -> AudioBuffer:
    """Band-limited rate conversion via a polyphase windowed-sinc filter.

    Kaiser window (beta=10), 64 taps per phase: passband flat well past
    0.45x the lower of the two rates, stopband around -100 dB. Equal rates
    pass the buffer through untouched.
    """
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if target_rate == buf.sample_rate:
        return buf

    g = math.gcd(int(buf.sample_rate), int(target_rate))
    up = target_rate // g
    down = buf.sample_rate // g
    max_rate = max(up, down)
    numtaps = _TAPS_PER_PHASE * max_rate + 1
    # resample_poly scales supplied coefficients by `up` itself
    h = firwin(numtaps, 1.0 / max_rate, window=("kaiser", _KAISER_BETA))

    out = resample_poly(buf.samples, up, down, axis=1, window=h, padtype="mean")
    return AudioBuffer(out, target_rate)


def downmix_or_select(buf: AudioBuffer, mode="mono-mix") -> AudioBuffer:
    """Reduce to one channel: ``mode`` is "mono-mix" or a channel index."""
    if mode == "mono-mix":
        return AudioBuffer(buf.samples.mean(axis=0, keepdims=True), buf.sample_rate)
    index = int(mode)
    return buf.channel(index)


def ingest(path, target_rate: int = ANALYSIS_RATE) -> AudioBuffer:
    """Load a WAV file and resample it to the analysis rate."""
    return resample(load_wav(path), target_rate)
