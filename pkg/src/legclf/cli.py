"""Command-line entry point: ``tune``, ``evaluate``, ``predict``, ``toy``.

Exit codes: 0 success, 1 bad flags, 2 load failure, 3 infeasible
request, 4 built-in example self-test failure.  Human-readable output
goes to stdout, diagnostics to stderr.  Every command that writes an
output file also writes ``<out>.manifest.json`` capturing the resolved
flags, dataset checksums, seed, tool version, and timestamps; primary
outputs themselves contain nothing time-dependent, so identical flags
and seed reproduce them byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, toy
from .classify import ALGORITHMS, FALLBACKS, ClassifierConfig, fit_predict
from .data import Dataset, DatasetError, load_dataset, scale_features
from .graph import build_bileg, build_leg, build_mileg
from .harness import TuningGrid, evaluate, format_report_table, tune
from .metrics import METRIC_NAMES
from .predictors import PREDICTORS, score_all
from .similarity import SIMILARITIES

EXIT_OK = 0
EXIT_BAD_FLAGS = 1
EXIT_LOAD = 2
EXIT_INFEASIBLE = 3
EXIT_SELF_TEST = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; the contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_FLAGS, f"{self.prog}: error: {message}\n")


def _add_shared(p: _Parser, *, data_required=True):
    p.add_argument("--data", required=data_required, help="dataset file")
    p.add_argument("--format", choices=["mulan-arff", "csv"], default="csv")
    p.add_argument("--labels", help="comma-separated label names (overrides the XML list)")
    p.add_argument("--algo", choices=list(ALGORITHMS))
    p.add_argument("--k", type=int)
    p.add_argument("--predictor", choices=list(PREDICTORS))
    p.add_argument("--similarity", choices=list(SIMILARITIES))
    p.add_argument("--threshold", type=float)
    p.add_argument("--strict-threshold", action="store_true",
                   help="threshold with strict > instead of >=")
    p.add_argument("--no-normalize", action="store_true",
                   help="threshold raw scores instead of per-row normalized ones")
    p.add_argument("--fallback", choices=list(FALLBACKS), default="none")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker threads (default: machine parallelism)")
    p.add_argument("--out", help="output file path")
    p.add_argument("--dump-scores", metavar="PATH", help="also dump the raw score matrix CSV")
    p.add_argument("--no-scale", action="store_true", help="skip min-max feature scaling")
    p.add_argument("--no-test-test-edges", action="store_true",
                   help="drop similarity edges between two test instances")
    p.add_argument("--tune-metric", choices=list(METRIC_NAMES), default="example_f1")


def _build_parser() -> _Parser:
    parser = _Parser(prog="legclf", description=__doc__)
    parser.add_argument("--version", action="version", version=f"legclf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_tune = sub.add_parser("tune", help="grid-search hyperparameters via stratified CV")
    _add_shared(p_tune)

    p_eval = sub.add_parser("evaluate", help="repeated stratified K-fold evaluation")
    _add_shared(p_eval)
    p_eval.add_argument("--config", help="tuned config JSON (alternative to inline flags)")

    p_pred = sub.add_parser("predict", help="label unlabeled instances")
    _add_shared(p_pred)
    p_pred.add_argument("--unlabeled", required=True, help="feature file of instances to label")
    p_pred.add_argument("--config", help="tuned config JSON (alternative to inline flags)")

    p_toy = sub.add_parser("toy", help="run the built-in worked example / smoke test")
    p_toy.add_argument("--variant", choices=["mileg", "bileg", "both"], default="both")
    p_toy.add_argument("--predictor", choices=list(PREDICTORS), default="cn")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"tune": _cmd_tune, "evaluate": _cmd_evaluate,
               "predict": _cmd_predict, "toy": _cmd_toy}[args.command]
    try:
        return handler(args)
    except DatasetError as exc:
        print(f"legclf: load error: {exc}", file=sys.stderr)
        return EXIT_LOAD
    except ValueError as exc:
        print(f"legclf: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def _load(args) -> Dataset:
    labels = args.labels.split(",") if args.labels else None
    return load_dataset(args.data, args.format, labels=labels)


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_path, args, data_files, started):
    flags = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())}
    manifest = {
        "command": args.command,
        "flags": flags,
        "data_sha256": {str(p): _sha256(p) for p in data_files},
        "seed": args.seed if hasattr(args, "seed") else None,
        "version": __version__,
        "started_utc": started,
        "finished_utc": datetime.now(timezone.utc).isoformat(),
    }
    path = Path(str(out_path) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def _inline_config(args) -> ClassifierConfig | None:
    if args.algo and args.k and args.predictor and args.similarity:
        if args.algo == "miculp" and args.threshold is None:
            return None
        return ClassifierConfig(
            algorithm=args.algo, k=args.k, predictor=args.predictor,
            similarity=args.similarity,
            threshold=args.threshold if args.algo == "miculp" else None,
            fallback=args.fallback, normalize=not args.no_normalize,
            strict_threshold=args.strict_threshold,
        )
    return None


def _resolve_config(args) -> ClassifierConfig | None:
    if getattr(args, "config", None):
        return ClassifierConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    return _inline_config(args)


def _cmd_tune(args) -> int:
    started = datetime.now(timezone.utc).isoformat()
    if not args.algo:
        print("legclf: error: tune requires --algo", file=sys.stderr)
        return EXIT_BAD_FLAGS
    dataset = _load(args)
    defaults = TuningGrid(selection_metric=args.tune_metric)
    grid = TuningGrid(
        ks=(args.k,) if args.k else defaults.ks,
        predictors=(args.predictor,) if args.predictor else defaults.predictors,
        similarities=(args.similarity,) if args.similarity else defaults.similarities,
        thresholds=(args.threshold,) if args.threshold is not None else defaults.thresholds,
        selection_metric=args.tune_metric,
    )
    config = tune(dataset, args.algo, grid, seed=args.seed,
                  folds=args.folds or 5, scale=not args.no_scale,
                  test_test_edges=not args.no_test_test_edges,
                  jobs=args.jobs)
    out = Path(args.out or "tuned_config.json")
    out.write_text(config.to_json(), encoding="utf-8")
    _write_manifest(out, args, [args.data], started)
    print(config.to_json(), end="")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    started = datetime.now(timezone.utc).isoformat()
    dataset = _load(args)
    config = _resolve_config(args)
    if config is None:
        print("legclf: error: evaluate needs --config or the full inline "
              "--algo/--k/--predictor/--similarity (+ --threshold for miculp)", file=sys.stderr)
        return EXIT_BAD_FLAGS
    report = evaluate(dataset, config, runs=args.runs, folds=args.folds or 10,
                      seed=args.seed, scale=not args.no_scale,
                      test_test_edges=not args.no_test_test_edges,
                      jobs=args.jobs)
    out = Path(args.out or "report.json")
    out.write_text(report.to_json(), encoding="utf-8")
    _write_manifest(out, args, [args.data], started)
    print(format_report_table(report), end="")
    return EXIT_OK


def _load_unlabeled(args, train: Dataset) -> np.ndarray:
    """Feature matrix of the instances to label; label columns are dropped."""
    from .data import EmptyDatasetError, _load_features_only

    try:
        other = load_dataset(args.unlabeled, args.format,
                             labels=list(train.label_names))
        return other.features
    except EmptyDatasetError:
        return np.empty((0, train.num_features))
    except DatasetError:
        return _load_features_only(Path(args.unlabeled), args.format)


def _cmd_predict(args) -> int:
    started = datetime.now(timezone.utc).isoformat()
    train = _load(args)
    config = _resolve_config(args)
    if config is None:
        print("legclf: error: predict needs --config or the full inline "
              "--algo/--k/--predictor/--similarity (+ --threshold for miculp)", file=sys.stderr)
        return EXIT_BAD_FLAGS
    unlabeled = _load_unlabeled(args, train)
    if unlabeled.shape[0] and unlabeled.shape[1] != train.num_features:
        print(f"legclf: load error: feature-dimension mismatch: training file has "
              f"{train.num_features} features, unlabeled file has {unlabeled.shape[1]}",
              file=sys.stderr)
        return EXIT_LOAD

    header = "id," + ",".join(train.label_names)
    lines = [header]
    if unlabeled.shape[0]:
        pred = fit_predict(train.features[: train.num_labeled], train.labels, unlabeled,
                           config, scale=not args.no_scale,
                           test_test_edges=not args.no_test_test_edges)
        for row_idx in range(pred.shape[0]):
            lines.append(f"{row_idx}," + ",".join(str(int(v)) for v in pred[row_idx]))
        if args.dump_scores:
            _dump_scores(args, train, unlabeled, config)
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _write_manifest(Path(args.out), args, [args.data, args.unlabeled], started)
    else:
        print(text, end="")
    return EXIT_OK


def _dump_scores(args, train, unlabeled, config):
    pooled = np.vstack([train.features[: train.num_labeled], unlabeled])
    if not args.no_scale:
        pooled = scale_features(pooled)
    n = train.num_labeled
    builder = {"culp": build_leg, "miculp": build_mileg, "biculp": build_bileg}[config.algorithm]
    graph = builder(pooled[:n], train.labels, pooled[n:], config.similarity, config.k,
                    test_test_edges=not args.no_test_test_edges)
    sm = score_all(graph, config.predictor, normalize=False)
    Path(args.dump_scores).write_text(sm.to_csv(), encoding="utf-8")


def _cmd_toy(args) -> int:
    problems = toy.self_check()
    if problems:
        for p in problems:
            print(f"legclf: toy self-test failed: {p}", file=sys.stderr)
        return EXIT_SELF_TEST
    variants = ["mileg", "bileg"] if args.variant == "both" else [args.variant]
    print(f"built-in example: 6 labeled points over labels {', '.join(toy.LABEL_NAMES)}, "
          f"1 query point, fixed similarity edges")
    for variant in variants:
        scores = toy.query_scores(variant, args.predictor)
        print(f"\n{variant} ({args.predictor}) scores for the query node:")
        if variant == "mileg":
            for idx, name in enumerate(toy.LABEL_NAMES):
                print(f"  {name}: {scores[idx]:g}")
            from .classify import miculp_from_scores
            if args.predictor == "cn":
                pred = miculp_from_scores(scores.reshape(1, -1), toy.RAW_THRESHOLD)
                chosen = [n for n, v in zip(toy.LABEL_NAMES, pred[0]) if v]
                print(f"  threshold t={toy.RAW_THRESHOLD:g} on raw scores -> {{{', '.join(chosen)}}}")
        else:
            for idx, name in enumerate(toy.LABEL_NAMES):
                print(f"  {name}: value-1 node {scores[2 * idx]:g}, value-0 node {scores[2 * idx + 1]:g}")
            from .classify import biculp_from_scores
            pred = biculp_from_scores(scores.reshape(1, -1))
            chosen = [n for n, v in zip(toy.LABEL_NAMES, pred[0]) if v]
            print(f"  pairwise comparison -> {{{', '.join(chosen)}}}")
        if args.predictor == "cn":
            print("  matches the expected constants")
        else:
            print("  no reference values exist for this predictor; shown for inspection only")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
