"""Command-line front-end: measure, distort, respond, correlate.

stdout carries data only (JSON or CSV, each tagged with a schema string);
diagnostics go to stderr. Exit codes: 0 success, 1 result not computable
for this input, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import nullcontext
from pathlib import Path

from . import __version__
from .audio_io import ANALYSIS_RATE, downmix_or_select, ingest, load_wav, save_wav
from .distortion import MAX_PERCENT, SCOPES, DistortionSpec, distort_audio
from .errors import (
    EmptyAfterPreprocessing,
    MusinoiseError,
    NotComputable,
    TargetAlwaysActive,
)
from .evaluation import (
    correlate_scores,
    response_score,
    run_response_matrix,
    write_response_csv,
)
from .measures import MEASURE_IDS
from .perceptual import measure_pair
from .prepro import SubBandLayout
from .stft import config_for_window

MEASURE_SCHEMA = "musinoise/measure-v1"
SCORE_SCHEMA = "musinoise/response-score-v1"
WAV_SUBTYPES = ("pcm16", "pcm24", "pcm32", "float32", "float64")

_NOT_COMPUTABLE = (NotComputable, EmptyAfterPreprocessing, TargetAlwaysActive)


def _parse_measures(arg: str) -> tuple[str, ...]:
    if arg == "all":
        return MEASURE_IDS
    ids = tuple(tok.strip() for tok in arg.split(",") if tok.strip())
    unknown = set(ids) - set(MEASURE_IDS)
    if unknown:
        raise ValueError(f"unknown measures: {', '.join(sorted(unknown))}")
    if not ids:
        raise ValueError("empty measure list")
    return ids


def _parse_bands(arg: str) -> SubBandLayout:
    bands = []
    for tok in arg.split(","):
        lo, sep, hi = tok.partition(":")
        if not sep:
            raise ValueError(f"band {tok!r} is not low:high")
        bands.append((float(lo), float(hi)))
    return SubBandLayout(tuple(bands))


def _parse_levels(arg: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in arg.split(",") if tok.strip())


def _out(path):
    if path in (None, "-"):
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


def _dump_json(payload: dict, path) -> None:
    with _out(path) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _pick_channel(buf, args):
    if args.channel is not None:
        return downmix_or_select(buf, args.channel)
    if args.mono_mix:
        return downmix_or_select(buf, "mono-mix")
    return buf


def cmd_measure(args) -> int:
    ref = _pick_channel(ingest(args.reference), args)
    proc = _pick_channel(ingest(args.processed), args)
    cfg = config_for_window(args.window_len, ANALYSIS_RATE)
    layout = args.bands or SubBandLayout()
    mids = args.measures
    results, failures = measure_pair(ref, proc, mids, cfg, layout)
    payload = {
        "schema": MEASURE_SCHEMA,
        "reference": str(args.reference),
        "processed": str(args.processed),
        "config": {
            "sample_rate": ANALYSIS_RATE,
            "window_len": cfg.window_len,
            "bands": [list(b) for b in layout.bands],
        },
        "measures": {
            mid: (
                {
                    "raw": results[mid].raw,
                    "scaled": results[mid].scaled,
                    "band": results[mid].selected_band,
                    "n_frames": results[mid].n_frames,
                }
                if mid in results
                else None
            )
            for mid in mids
        },
        "errors": failures,
    }
    _dump_json(payload, args.output)
    return 0 if results else 1


def cmd_distort(args) -> int:
    buf = load_wav(args.input)
    cfg = config_for_window(args.window_len, buf.sample_rate)
    d = DistortionSpec(args.percent, args.seed, args.scope)
    save_wav(distort_audio(buf, d, cfg), args.output, subtype=args.subtype)
    return 0


def cmd_respond(args) -> int:
    paths = sorted(p for p in Path(args.itemdir).iterdir() if p.suffix.lower() == ".wav")
    if not paths:
        raise FileNotFoundError(f"no .wav files in {args.itemdir}")
    items = [(p.stem, ingest(p)) for p in paths]
    cfg = config_for_window(args.window_len, ANALYSIS_RATE)
    layout = args.bands or SubBandLayout()
    curves = run_response_matrix(
        items, args.levels, args.measures, args.seed, cfg, layout, args.scope, args.jobs
    )
    with _out(args.csv) as fh:
        write_response_csv(fh, curves)
    scores: dict[str, float | None] = {}
    reasons: dict[str, str] = {}
    for mid, curve in curves.items():
        try:
            scores[mid] = response_score(curve)
        except (ValueError, NotComputable) as exc:
            scores[mid] = None
            reasons[mid] = str(exc)
    payload = {
        "schema": SCORE_SCHEMA,
        "levels": list(args.levels),
        "seed": args.seed,
        "items": list(curves[args.measures[0]].item_names),
        "response_scores": scores,
        "errors": reasons,
    }
    _dump_json(payload, args.report)
    return 0


def _read_table(path, value_column: str) -> tuple[dict[str, float], set[str]]:
    """Read item-keyed CSV; returns (values, flagged reference items)."""
    values: dict[str, float] = {}
    refs: set[str] = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(line for line in fh if not line.startswith("#"))
        cols = reader.fieldnames or []
        if "item" not in cols or value_column not in cols:
            raise ValueError(f"{path}: need columns item,{value_column}")
        for row in reader:
            item = row["item"].strip()
            if item in values:
                raise ValueError(f"{path}: duplicate item {item!r}")
            values[item] = float(row[value_column])
            if str(row.get("reference", "")).strip().lower() in ("1", "true", "yes"):
                refs.add(item)
    return values, refs


def cmd_correlate(args) -> int:
    scores, score_refs = _read_table(args.scores, "score")
    measured, meas_refs = _read_table(args.measures_csv, "value")
    refs = score_refs | meas_refs
    joined = (set(scores) & set(measured)) - refs
    if len(joined) < 3:
        raise ValueError(f"only {len(joined)} joined items after exclusions, need 3")
    report = correlate_scores(scores, measured, refs)
    _dump_json(report.to_dict(), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="musinoise",
        description="Objective measurement of musical-noise artifacts in audio.",
    )
    parser.add_argument("--version", action="version", version=f"musinoise {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def stft_flags(p):
        p.add_argument(
            "--window-len", type=int, default=1024,
            help="analysis window length in samples, power of two (default 1024)",
        )

    def analysis_flags(p):
        p.add_argument(
            "--measures", type=_parse_measures, default=MEASURE_IDS, metavar="IDS",
            help="comma-separated subset of %s, or 'all'" % ",".join(MEASURE_IDS),
        )
        p.add_argument(
            "--bands", type=_parse_bands, default=None, metavar="LO:HI,...",
            help="sub-band edges in Hz (default 50:750,750:6000,6000:16000)",
        )
        stft_flags(p)

    m = sub.add_parser("measure", help="measure one reference/processed pair")
    m.add_argument("reference", help="unprocessed WAV")
    m.add_argument("processed", help="processed WAV")
    analysis_flags(m)
    chan = m.add_mutually_exclusive_group()
    chan.add_argument("--channel", type=int, default=None, help="analyze one channel")
    chan.add_argument(
        "--mono-mix", action="store_true", help="average channels before analysis"
    )
    m.add_argument("--output", default=None, metavar="PATH", help="JSON output (default stdout)")
    m.set_defaults(func=cmd_measure)

    d = sub.add_parser("distort", help="zero random spectrogram bins and resynthesize")
    d.add_argument("input", help="input WAV")
    d.add_argument("output", help="output WAV")
    d.add_argument(
        "--percent", type=float, required=True,
        help=f"percentage of bins to zero, 0..{MAX_PERCENT}",
    )
    d.add_argument("--seed", type=int, required=True, help="PRNG seed")
    d.add_argument("--scope", choices=SCOPES, default="global")
    d.add_argument("--subtype", choices=WAV_SUBTYPES, default="float32")
    stft_flags(d)
    d.set_defaults(func=cmd_distort)

    r = sub.add_parser("respond", help="distortion-response experiment over a directory")
    r.add_argument("itemdir", help="directory of WAV items")
    r.add_argument(
        "--levels", type=_parse_levels, default=(0, 10, 25, 50, 75, 90, 99.8),
        metavar="P0,P1,...", help="ascending zeroing percentages",
    )
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--scope", choices=SCOPES, default="global")
    r.add_argument("--jobs", type=int, default=1, help="worker threads (capped by MUSINOISE_MAX_JOBS)")
    analysis_flags(r)
    r.add_argument("--csv", default=None, metavar="PATH", help="curve CSV (default stdout)")
    r.add_argument("--report", default=None, metavar="PATH", help="score JSON (default stdout)")
    r.set_defaults(func=cmd_respond)

    c = sub.add_parser("correlate", help="correlate measure outputs with external scores")
    c.add_argument("scores", help="CSV with columns item,score[,reference]")
    c.add_argument("measures_csv", metavar="measures", help="CSV with columns item,value")
    c.add_argument("--output", default=None, metavar="PATH", help="JSON output (default stdout)")
    c.set_defaults(func=cmd_correlate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _NOT_COMPUTABLE as exc:
        print(f"musinoise: not computable: {exc}", file=sys.stderr)
        return 1
    except (MusinoiseError, OSError, ValueError) as exc:
        print(f"musinoise: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
