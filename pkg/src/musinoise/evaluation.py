"""Response experiments, the response score, and correlation reporting.

A measure is characterized by distorting items at a ladder of zeroing
percentages and recording the scaled output. The response score collapses
such a curve family into one number rewarding monotonicity, low inter-item
deviation, and wide range. Agreement with external (e.g. listening-test)
scores is reported as Pearson r and Kendall tau-b.
"""

from __future__ import annotations

import csv
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .audio_io import AudioBuffer
from .distortion import DistortionSpec, distort_audio
from .errors import MusinoiseError, NotComputable, TargetAlwaysActive
from .measures import MEASURE_IDS
from .perceptual import measure_pair
from .prepro import SubBandLayout
from .stft import PowerSpectrogram, StftConfig

RESPONSE_SCHEMA = "musinoise/response-v1"
CORRELATION_SCHEMA = "musinoise/correlation-v1"

STD_PENALTY_SPAN = 50.0  # inter-item std saturating the deviation penalty


@dataclass
class ResponseCurve:
    """Scaled measure outputs of several items over a distortion ladder."""

    measure_id: str
    control: tuple[float, ...]
    item_names: tuple[str, ...]
    per_item: np.ndarray = field(repr=False)  # (items, levels)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.control, self.control[1:])):
            raise ValueError("control levels must be strictly ascending")
        if self.per_item.shape != (len(self.item_names), len(self.control)):
            raise ValueError("matrix shape does not match items x levels")

    @property
    def mean(self) -> np.ndarray:
        return self.per_item.mean(axis=0)

    @property
    def std(self) -> np.ndarray:
        return self.per_item.std(axis=0)

    @property
    def num_items(self) -> int:
        return len(self.item_names)


def pearson(x, y) -> float:
    """Product-moment correlation; undefined for short or constant input."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("need two equal-length 1-d sequences")
    if x.size < 3:
        raise NotComputable("need at least 3 pairs")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise NotComputable("constant sequence has no correlation")
    return float(stats.pearsonr(x, y).statistic)


def kendall(x, y) -> float:
    """Tie-corrected rank correlation (tau-b); undefined when a side is all ties."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("need two equal-length 1-d sequences")
    if x.size < 3:
        raise NotComputable("need at least 3 pairs")
    t = stats.kendalltau(x, y, variant="b").statistic
    if np.isnan(t):
        raise NotComputable("rank correlation undefined (all ties)")
    return float(t)


def response_score(curve: ResponseCurve) -> float:
    """Concordance x span x steadiness, each factor in [0, 1].

    Zero for a flat mean curve; 1 only for a strictly concordant mean
    spanning the full scale with items in perfect agreement.
    """
    if len(curve.control) < 3:
        raise ValueError("need at least 3 levels")
    if curve.num_items < 2:
        raise ValueError("need at least 2 items")
    mean = curve.mean
    span = float(np.ptp(mean))
    if span == 0.0:
        return 0.0
    concordance = max(0.0, kendall(np.asarray(curve.control), mean))
    deviation = min(float(curve.std.mean()) / STD_PENALTY_SPAN, 1.0)
    return concordance * (span / 100.0) * (1.0 - deviation)


@dataclass
class ActivityMask:
    """Per-frame flag: True where the target source is active."""

    active: np.ndarray

    def __post_init__(self):
        self.active = np.asarray(self.active, dtype=bool)
        if self.active.ndim != 1:
            raise ValueError("mask must be 1-d")

    def __len__(self) -> int:
        return self.active.size


def load_activity_mask(path) -> ActivityMask:
    """Read a mask file: one 0 or 1 per line, blank lines ignored."""
    flags = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            tok = line.strip()
            if not tok:
                continue
            if tok not in ("0", "1"):
                raise ValueError(f"{path}:{lineno}: expected 0 or 1, got {tok!r}")
            flags.append(tok == "1")
    return ActivityMask(np.array(flags, dtype=bool))


def activity_from_reference(
    buf: AudioBuffer, config: StftConfig | None = None, threshold_db: float = -60.0
) -> ActivityMask:
    """Gate the reference target by frame RMS against full scale.

    Frames follow the analysis grid; a frame is active when the RMS over
    all channels exceeds the threshold.
    """
    cfg = config or StftConfig(sample_rate=buf.sample_rate)
    num_frames = (buf.num_samples - cfg.window_len) // cfg.hop + 1
    if num_frames < 1:
        raise ValueError("reference shorter than one frame")
    gate = 10.0 ** (threshold_db / 20.0)
    active = np.empty(num_frames, dtype=bool)
    for ell in range(num_frames):
        seg = buf.samples[:, ell * cfg.hop : ell * cfg.hop + cfg.window_len]
        active[ell] = np.sqrt(np.mean(seg**2)) > gate
    return ActivityMask(active)


def select_noise_frames(
    nin: PowerSpectrogram, nout: PowerSpectrogram, mask: ActivityMask
) -> tuple[PowerSpectrogram, PowerSpectrogram]:
    """Keep only frames where the target is inactive, order preserved."""
    if nin.num_frames != nout.num_frames:
        raise ValueError("spectrogram frame counts differ")
    if len(mask) != nin.num_frames:
        raise ValueError(
            f"mask has {len(mask)} frames, spectrograms have {nin.num_frames}"
        )
    keep = ~mask.active
    if not keep.any():
        raise TargetAlwaysActive("no frame with inactive target")
    return (
        PowerSpectrogram(nin.power[keep], nin.config),
        PowerSpectrogram(nout.power[keep], nout.config),
    )


def _worker_count(jobs: int | None) -> int:
    jobs = 1 if jobs is None else max(1, jobs)
    cap = os.environ.get("MUSINOISE_MAX_JOBS")
    if cap:
        jobs = min(jobs, max(1, int(cap)))
    return jobs


def _sub_seed(seed: int, item: int, level: int) -> int:
    return int(np.random.SeedSequence([seed, item, level]).generate_state(1)[0])


def run_response_matrix(
    items,
    levels,
    measure_ids=MEASURE_IDS,
    seed: int = 0,
    config: StftConfig | None = None,
    layout: SubBandLayout = SubBandLayout(),
    scope: str = "global",
    jobs: int | None = None,
) -> dict[str, ResponseCurve]:
    """Distort every item at every level once and run all measures on it.

    Items are (name, AudioBuffer) pairs or bare buffers. The reference for
    each item is its own zero-damage round trip, so the level-0 column is
    exactly zero. Items failing at any cell are dropped with a warning.
    Distortion masks depend on (seed, item index, level index) only, so the
    matrix is reproducible and independent of worker scheduling.
    """
    named = [
        it if isinstance(it, tuple) else (f"item{idx:02d}", it)
        for idx, it in enumerate(items)
    ]
    if not named:
        raise ValueError("need at least one item")
    levels = tuple(float(v) for v in levels)

    def cell(i: int, j: int) -> dict[str, float]:
        buf = named[i][1]
        cfg = config or StftConfig(sample_rate=buf.sample_rate)
        ref = distort_audio(buf, DistortionSpec(0.0, 0), cfg)
        proc = distort_audio(
            buf, DistortionSpec(levels[j], _sub_seed(seed, i, j), scope), cfg
        )
        results, failures = measure_pair(ref, proc, measure_ids, cfg, layout)
        if failures:
            raise NotComputable(
                "; ".join(f"{mid}: {why}" for mid, why in failures.items())
            )
        return {mid: res.scaled for mid, res in results.items()}

    grid: dict[tuple[int, int], dict[str, float]] = {}
    bad: dict[int, str] = {}
    tasks = [(i, j) for i in range(len(named)) for j in range(len(levels))]
    workers = _worker_count(jobs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {t: pool.submit(cell, *t) for t in tasks}
        for (i, j), fut in futures.items():
            try:
                grid[i, j] = fut.result()
            except MusinoiseError as exc:
                bad.setdefault(i, str(exc))
    else:
        for i, j in tasks:
            try:
                grid[i, j] = cell(i, j)
            except MusinoiseError as exc:
                bad.setdefault(i, str(exc))

    for i, why in sorted(bad.items()):
        warnings.warn(f"item {named[i][0]} skipped: {why}", stacklevel=2)
    kept = [i for i in range(len(named)) if i not in bad]
    if not kept:
        raise NotComputable("every item failed")
    names = tuple(named[i][0] for i in kept)
    curves = {}
    for mid in measure_ids:
        matrix = np.array([[grid[i, j][mid] for j in range(len(levels))] for i in kept])
        curves[mid] = ResponseCurve(mid, levels, names, matrix)
    return curves


def run_response_experiment(
    items, levels, measure_id: str, seed: int = 0, **kwargs
) -> ResponseCurve:
    """Single-measure convenience wrapper around run_response_matrix."""
    return run_response_matrix(items, levels, (measure_id,), seed, **kwargs)[measure_id]


@dataclass(frozen=True)
class CorrelationReport:
    pearson_r: float
    kendall_t: float
    n: int
    excluded: tuple[str, ...] = ()

    def __post_init__(self):
        if not (abs(self.pearson_r) <= 1 and abs(self.kendall_t) <= 1):
            raise ValueError("coefficients must lie in [-1, 1]")
        if self.n < 3:
            raise ValueError("a reportable coefficient needs n >= 3")

    def to_dict(self) -> dict:
        return {
            "schema": CORRELATION_SCHEMA,
            "pearson_r": self.pearson_r,
            "kendall_t": self.kendall_t,
            "n": self.n,
            "excluded": list(self.excluded),
        }


def correlate_scores(
    scores: dict[str, float],
    measured: dict[str, float],
    reference_items=(),
) -> CorrelationReport:
    """Join two per-item tables on item id and report r and tau-b.

    ``reference_items`` are dropped before correlating (anchors pinned to
    the top of the scale would inflate both coefficients).
    """
    excluded = tuple(sorted(set(reference_items) & set(scores) & set(measured)))
    keys = sorted((set(scores) & set(measured)) - set(excluded))
    if len(keys) < 3:
        raise NotComputable(f"only {len(keys)} joined items, need 3")
    x = [scores[k] for k in keys]
    y = [measured[k] for k in keys]
    return CorrelationReport(pearson(x, y), kendall(x, y), len(keys), excluded)


def write_response_csv(fh, curves: dict[str, ResponseCurve]) -> None:
    """One row per (item, level, measure, value), schema comment first."""
    fh.write(f"# schema={RESPONSE_SCHEMA}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["item", "level", "measure", "value"])
    first = next(iter(curves.values()))
    for i, name in enumerate(first.item_names):
        for j, level in enumerate(first.control):
            for mid, curve in curves.items():
                writer.writerow([name, f"{level:g}", mid, f"{curve.per_item[i, j]:.6f}"])
