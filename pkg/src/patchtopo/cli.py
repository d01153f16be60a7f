"""Command-line front end for the patch-based topology pipeline.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
All randomness downstream of ``--seed`` is deterministic; triangulation
jitter is derived from the data itself, so repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import io as pio
from .alpha import alpha_persistence
from .bench import bench_ph
from .cubical import cubical_persistence
from .errors import DataError, NumericalError, PatchTopoError
from .features import vectorize
from .ml import (cross_validate, enumerate_pca_trials, enumerate_stats_trials,
                 run_trials, top_fraction, trials_to_csv)
from .patches import PatchConfig, build_point_cloud


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; usage errors are 1
        raise UsageError(message)


def _patch_config(args) -> PatchConfig:
    if (args.stats is None) == (args.pca is None):
        raise UsageError("exactly one of --stats or --pca is required")
    if args.stats is not None:
        names = tuple(s.strip() for s in args.stats.split(",") if s.strip())
        encoder = ("stats", names)
    else:
        encoder = ("pca", args.pca)
    return PatchConfig(patch_size=args.patch_size, encoder=encoder,
                       normalize_axes=not args.no_normalize)


def _add_encoder_flags(p) -> None:
    p.add_argument("--patch-size", type=int, required=True)
    p.add_argument("--stats", help="comma-separated stat names (2 or 3)")
    p.add_argument("--pca", type=int, help="number of PCA components (3)")
    p.add_argument("--no-normalize", action="store_true",
                   help="keep raw axis scales instead of min-max [0,1]")


def _load_manifest(path: str) -> list[dict]:
    mpath = Path(path)
    if not mpath.is_file():
        raise DataError(f"no such manifest: {mpath}")
    try:
        entries = json.loads(mpath.read_text())
    except json.JSONDecodeError as e:
        raise DataError(f"malformed manifest {mpath}: {e}") from e
    if not isinstance(entries, list) or not entries:
        raise DataError("manifest must be a non-empty JSON array")
    out = []
    for i, e in enumerate(entries):
        if not isinstance(e, dict) or "volume" not in e or "mask" not in e or "label" not in e:
            raise DataError(f"manifest entry {i} needs volume, mask, and label keys")
        out.append({
            "volume": mpath.parent / e["volume"],
            "mask": mpath.parent / e["mask"],
            "label": str(e["label"]),
            "id": str(e.get("id", Path(e["volume"]).stem)),
        })
    return out


def _sample_features(entry: dict, cfg: PatchConfig, drop_essential: bool) -> np.ndarray:
    v = pio.load_volume(entry["volume"])
    m = pio.load_mask(entry["mask"])
    pc = build_point_cloud(v, m, cfg)
    b0, b1, b2 = alpha_persistence(pc)
    return vectorize(b0, b1, b2, drop_essential=drop_essential)


def _cmd_pointcloud(args) -> None:
    cfg = _patch_config(args)
    v = pio.load_volume(args.volume)
    m = pio.load_mask(args.mask)
    pc = build_point_cloud(v, m, cfg)
    pio.save_point_cloud(pc.points, args.out)


def _cmd_ph(args) -> None:
    if args.cubical and args.pointcloud:
        raise UsageError("--pointcloud and --cubical are mutually exclusive")
    if args.cubical:
        if args.volume is None:
            raise UsageError("--cubical requires --volume")
        v = pio.load_volume(args.volume)
        m = pio.load_mask(args.mask) if args.mask else None
        barcodes = cubical_persistence(v, m)
    else:
        if args.pointcloud is None:
            raise UsageError("provide --pointcloud or --cubical with --volume")
        points = pio.load_point_cloud(args.pointcloud)
        barcodes = alpha_persistence(points)
    canonical = [type(b)(dim=b.dim, bars=b.canonical()) for b in barcodes]
    pio.save_barcode(canonical, args.out)


def _cmd_features(args) -> None:
    b0, b1, b2 = pio.load_barcode(args.barcodes)
    vec = vectorize(b0, b1, b2, drop_essential=args.drop_essential)
    sample_id = args.id if args.id is not None else Path(args.barcodes).stem
    pio.save_features([(sample_id, vec, args.label)], args.out)


def _cmd_pipeline(args) -> None:
    cfg = _patch_config(args)
    entries = _load_manifest(args.manifest)

    def work(entry):
        return _sample_features(entry, cfg, args.drop_essential)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            vecs = list(pool.map(work, entries))
    else:
        vecs = [work(e) for e in entries]
    rows = [(e["id"], vec, e["label"]) for e, vec in zip(entries, vecs)]
    pio.save_features(rows, args.out)


def _cmd_cv(args) -> None:
    ids, x, labels, _ = pio.load_features(args.features)
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise NumericalError("cv needs at least two classes")
    y = np.array([classes.index(l) for l in labels], dtype=np.int64)
    report = cross_validate(x, y, args.classifier, seed=args.seed,
                            shallow=args.shallow, config=Path(args.features).name)
    Path(args.out).write_text(report.to_csv())


def _cmd_gridsearch(args) -> None:
    entries = _load_manifest(args.manifest)
    labels_str = [e["label"] for e in entries]
    classes = sorted(set(labels_str))
    if len(classes) < 2:
        raise NumericalError("gridsearch needs at least two classes")
    labels = np.array([classes.index(l) for l in labels_str], dtype=np.int64)

    volumes = [pio.load_volume(e["volume"]) for e in entries]
    masks = [pio.load_mask(e["mask"]) for e in entries]

    def feature_builder(cfg: PatchConfig) -> np.ndarray:
        def work(i):
            pc = build_point_cloud(volumes[i], masks[i], cfg)
            return vectorize(*alpha_persistence(pc))
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                vecs = list(pool.map(work, range(len(entries))))
        else:
            vecs = [work(i) for i in range(len(entries))]
        return np.array(vecs)

    if args.track == "pca":
        trials = enumerate_pca_trials()
        results = run_trials(feature_builder, labels, trials, seed=args.seed,
                             shallow=False, rank_metric=args.rank_metric)
    elif args.stage == 1:
        trials = enumerate_stats_trials()
        results = run_trials(feature_builder, labels, trials, seed=args.seed,
                             shallow=True, rank_metric=args.rank_metric)
    else:
        if not args.stage1:
            raise UsageError("--stage 2 requires --stage1 RESULTS.csv")
        scores = _read_rank_scores(args.stage1)
        all_trials = enumerate_stats_trials()
        if len(scores) != len(all_trials):
            raise DataError(
                f"stage-1 results have {len(scores)} trials, expected {len(all_trials)}"
            )
        keep = top_fraction(scores, 0.05)
        trials = [all_trials[i] for i in keep]
        results = run_trials(feature_builder, labels, trials, seed=args.seed,
                             shallow=False, rank_metric=args.rank_metric)
        for r, i in zip(results, keep):
            r.trial_id = int(i)  # keep stage-1 trial ids
    Path(args.out).write_text(trials_to_csv(results))


def _read_rank_scores(path: str) -> list[float]:
    import csv

    p = Path(path)
    if not p.is_file():
        raise DataError(f"no such file: {p}")
    with p.open() as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or "rank_score" not in header:
            raise DataError(f"{p}: no rank_score column")
        col = header.index("rank_score")
        out = []
        for row in reader:
            if not row:
                continue
            val = row[col]
            out.append(float("-inf") if val == "nan" else float(val))
    return out


def _cmd_bench(args) -> None:
    cfg = _patch_config(args)
    v = pio.load_volume(args.volume)
    m = pio.load_mask(args.mask)
    report = bench_ph(v, m, cfg, trials=args.trials,
                      include_build=not args.ph_only)
    out = Path(args.out)
    if out.suffix == ".csv":
        out.write_text(report.to_csv())
    else:
        out.write_text(report.to_json())


def build_parser() -> _Parser:
    parser = _Parser(prog="patchtopo",
                     description="Patch-based topological features for 3D volumes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pointcloud", help="volume+mask -> point-cloud CSV")
    p.add_argument("--volume", required=True)
    p.add_argument("--mask", required=True)
    _add_encoder_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_pointcloud)

    p = sub.add_parser("ph", help="persistent homology -> barcode CSV")
    p.add_argument("--pointcloud", help="point-cloud CSV (alpha filtration)")
    p.add_argument("--cubical", action="store_true", help="cubical filtration of a volume")
    p.add_argument("--volume")
    p.add_argument("--mask")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_ph)

    p = sub.add_parser("features", help="barcode CSV -> feature CSV")
    p.add_argument("--barcodes", required=True)
    p.add_argument("--id", help="sample id (default: barcode file stem)")
    p.add_argument("--label", default="")
    p.add_argument("--drop-essential", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_features)

    p = sub.add_parser("pipeline", help="manifest of volumes -> feature CSV")
    p.add_argument("--manifest", required=True)
    _add_encoder_flags(p)
    p.add_argument("--drop-essential", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_pipeline)

    p = sub.add_parser("cv", help="cross-validated classification report")
    p.add_argument("--features", required=True)
    p.add_argument("--classifier", choices=("lr", "knn"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shallow", action="store_true", help="single-value hyperparameter grid")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_cv)

    p = sub.add_parser("gridsearch", help="patch-size/stats grid search")
    p.add_argument("--manifest", required=True)
    p.add_argument("--stage", type=int, choices=(1, 2), default=1)
    p.add_argument("--track", choices=("stats", "pca"), default="stats")
    p.add_argument("--stage1", help="stage-1 results CSV (required for --stage 2)")
    p.add_argument("--rank-metric", choices=("auc", "accuracy"), default="auc")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_gridsearch)

    p = sub.add_parser("bench", help="patch-based vs cubical timing")
    p.add_argument("--volume", required=True)
    p.add_argument("--mask", required=True)
    _add_encoder_flags(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--ph-only", action="store_true",
                   help="exclude point-cloud construction from patch timings")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.fn(args)
        return 0
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 3
    except PatchTopoError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
