"""Experiment protocol: grid tuning, repeated cross validation, rank tables.

Tuning scores every grid cell by its mean selection metric over
stratified folds (5 by default) and returns the best cell; ties break
toward smaller k, then predictor order cn < aa < ra, then similarity
order cosine < euclidean < manhattan, then smaller threshold.

Evaluation reruns stratified K-fold ``runs`` times (run r uses seed+r),
building the graph per fold so test instances of other folds never leak
structure, and aggregates mean +- population std over all run x fold
cells.  Fold results are reduced in fixed (run, fold) order, so reports
are byte-identical across invocations and across ``jobs`` settings.

The heavy work per fold (pairwise ranking) is independent of k and of
the predictor, so each (similarity, fold) task ranks once and sweeps
the whole k/predictor/threshold grid from that ranking.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import metrics as M
from .classify import ALGORITHMS, ClassifierConfig, biculp_from_scores, fit_predict, miculp_from_scores
from .data import Dataset, make_folds, scale_features, split
from .graph import assemble_graph
from .predictors import PREDICTORS, score_all
from .similarity import SIMILARITIES, edges_from_ranking, rank_neighbors

_PRED_ORDER = {p: i for i, p in enumerate(PREDICTORS)}
_SIM_ORDER = {"cosine": 0, "euclidean": 1, "manhattan": 2}

_METRIC_FNS = {
    "hamming_loss": M.hamming_loss,
    "example_f1": M.example_f1,
    "micro_f1": M.micro_f1,
    "macro_f1": lambda a, b: M.macro_f1(a, b)[0],
}


def _default_thresholds():
    return tuple(round(0.05 * i, 2) for i in range(21))


@dataclass(frozen=True)
class TuningGrid:
    ks: tuple = tuple(range(1, 46))
    predictors: tuple = PREDICTORS
    similarities: tuple = SIMILARITIES
    thresholds: tuple = field(default_factory=_default_thresholds)
    selection_metric: str = "example_f1"

    def __post_init__(self):
        if not self.ks or not self.predictors or not self.similarities or not self.thresholds:
            raise ValueError("all grid dimensions must be non-empty")
        if any(k < 1 for k in self.ks):
            raise ValueError("grid k values must be >= 1")
        if any(not 0.0 <= t <= 1.0 for t in self.thresholds):
            raise ValueError("thresholds must lie in [0, 1]")
        if any(p not in PREDICTORS for p in self.predictors):
            raise ValueError(f"predictors must be among {PREDICTORS}")
        if any(s not in SIMILARITIES for s in self.similarities):
            raise ValueError(f"similarities must be among {SIMILARITIES}")
        if self.selection_metric not in M.METRIC_NAMES:
            raise ValueError(f"selection_metric must be one of {M.METRIC_NAMES}")


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregated repeated-CV results plus the raw per-fold scores.

    ``cells`` holds one record per (run, fold) with all four metrics, so
    the reported means and stds are recomputable.  Wall-clock timings
    live on the object but stay out of the serialized report, which must
    be byte-identical for identical inputs; the CLI records timings in
    the run manifest instead.
    """

    config: ClassifierConfig
    runs: int
    folds: int
    seed: int
    means: dict
    stds: dict
    cells: tuple
    wall_clock: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "runs": self.runs,
            "folds": self.folds,
            "seed": self.seed,
            "means": {k: self.means[k] for k in M.METRIC_NAMES},
            "stds": {k: self.stds[k] for k in M.METRIC_NAMES},
            "cells": [dict(c) for c in self.cells],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


# ---------------------------------------------------------------------------
# tuning


def tune(dataset: Dataset, algorithm: str, grid: TuningGrid | None = None,
         seed: int = 0, *, folds: int = 5, scale: bool = True,
         test_test_edges: bool = True, jobs: int = 1) -> ClassifierConfig:
    """Exhaustive grid search scored by mean CV selection metric."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {algorithm!r}")
    grid = grid or TuningGrid()
    n = dataset.num_labeled
    if n < 10:
        raise ValueError(f"tuning needs at least 10 labeled rows, dataset has {n}")
    if folds > n:
        raise ValueError(f"dataset too small for {folds}-fold tuning")
    if algorithm == "culp" and (dataset.labels.sum(axis=1) != 1).any():
        raise ValueError("single-label required: culp needs exactly one positive label per row")
    ks = tuple(k for k in grid.ks if k < n)
    if not ks:
        raise ValueError(f"no grid k value is feasible for {n} instances")

    plan = make_folds(dataset, folds, seed)
    tasks = [(sim, fold) for sim in grid.similarities for fold in range(folds)]

    def run_task(task):
        sim, fold = task
        return _fold_cell_scores(dataset, plan, fold, algorithm, sim, ks, grid,
                                 scale, test_test_edges)

    results = _map_tasks(run_task, tasks, jobs)

    sums: dict = {}
    for (sim, fold), cell_scores in zip(tasks, results):
        for cell, value in cell_scores.items():
            sums[cell] = sums.get(cell, 0.0) + value
    higher = M.HIGHER_IS_BETTER[grid.selection_metric]

    best_cell, best_value = None, None
    for cell in sorted(sums, key=_cell_priority):
        value = sums[cell] / folds
        if best_value is None or (value > best_value if higher else value < best_value):
            best_cell, best_value = cell, value
    k, predictor, sim, threshold = best_cell
    return ClassifierConfig(algorithm=algorithm, k=k, predictor=predictor,
                            similarity=sim, threshold=threshold)


def _cell_priority(cell):
    k, predictor, sim, threshold = cell
    return (k, _PRED_ORDER[predictor], _SIM_ORDER[sim],
            -1.0 if threshold is None else threshold)


def _fold_cell_scores(dataset, plan, fold, algorithm, sim, ks, grid, scale,
                      test_test_edges):
    """Selection-metric value of every (k, predictor, threshold) cell on one fold."""
    part = split(dataset, plan, fold)
    pooled = np.vstack([part.train_features, part.test_features])
    if scale:
        pooled = scale_features(pooled)
    n_train = part.train_features.shape[0]
    m = part.test_features.shape[0]
    ranking = rank_neighbors(pooled, sim, limit=max(ks))
    metric_fn = _METRIC_FNS[grid.selection_metric]
    variant = {"culp": "leg", "miculp": "mileg", "biculp": "bileg"}[algorithm]

    out = {}
    for k in ks:
        edges = edges_from_ranking(ranking, k)
        if not test_test_edges:
            keep = ~((edges.pairs[:, 0] >= n_train) & (edges.pairs[:, 1] >= n_train))
            edges = type(edges)(edges.pairs[keep])
        graph = assemble_graph(variant, edges, part.train_labels, m)
        for predictor in grid.predictors:
            if algorithm == "miculp":
                sm = score_all(graph, predictor, normalize=True)
                for t in grid.thresholds:
                    pred = miculp_from_scores(sm.values, t)
                    out[(k, predictor, sim, t)] = metric_fn(part.test_labels, pred)
            elif algorithm == "biculp":
                sm = score_all(graph, predictor, normalize=False)
                pred = biculp_from_scores(sm.values)
                out[(k, predictor, sim, None)] = metric_fn(part.test_labels, pred)
            else:
                sm = score_all(graph, predictor, normalize=False)
                labels = sm.values.argmax(axis=1)
                pred = np.zeros_like(part.test_labels)
                pred[np.arange(labels.size), labels] = 1
                out[(k, predictor, sim, None)] = metric_fn(part.test_labels, pred)
    return out


# ---------------------------------------------------------------------------
# evaluation


def evaluate(dataset: Dataset, config: ClassifierConfig, runs: int = 5,
             folds: int = 10, seed: int = 0, *, scale: bool = True,
             test_test_edges: bool = True, jobs: int = 1) -> ExperimentReport:
    """Repeated stratified K-fold evaluation of one configuration."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if folds > dataset.num_labeled:
        raise ValueError(f"folds={folds} exceeds the {dataset.num_labeled} labeled instances")
    if config.k >= dataset.num_labeled:
        raise ValueError(f"k={config.k} is infeasible for {dataset.num_labeled} instances")
    if config.algorithm == "culp" and (dataset.labels.sum(axis=1) != 1).any():
        raise ValueError("single-label required: culp needs exactly one positive label per row")

    started = time.perf_counter()
    plans = [make_folds(dataset, folds, seed + r) for r in range(runs)]
    fold_setup_s = time.perf_counter() - started
    tasks = [(r, f) for r in range(runs) for f in range(folds)]

    def run_task(task):
        r, f = task
        t0 = time.perf_counter()
        part = split(dataset, plans[r], f)
        pred = fit_predict(part.train_features, part.train_labels, part.test_features,
                           config, scale=scale, test_test_edges=test_test_edges)
        return M.compute_all(part.test_labels, pred), time.perf_counter() - t0

    results = _map_tasks(run_task, tasks, jobs)

    cells = []
    per_run_s = [0.0] * runs
    for (r, f), (report, task_s) in zip(tasks, results):
        per_run_s[r] += task_s
        cells.append({"run": r, "fold": f,
                      **{name: getattr(report, name) for name in M.METRIC_NAMES}})
    means, stds = {}, {}
    for name in M.METRIC_NAMES:
        values = np.array([c[name] for c in cells])
        means[name] = float(values.mean())
        stds[name] = float(values.std())  # population std over the run x fold cells
    wall = {"total_s": time.perf_counter() - started,
            "fold_setup_s": fold_setup_s, "per_run_s": per_run_s}
    return ExperimentReport(config=config, runs=runs, folds=folds, seed=seed,
                            means=means, stds=stds, cells=tuple(cells),
                            wall_clock=wall)


def _map_tasks(fn, tasks, jobs):
    if jobs is None or jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# ranking


def rank(scores: dict, direction: str) -> dict:
    """Per-dataset ranks (1 = best) and per-method averages.

    ``scores`` maps dataset -> method -> value.  Tied values share the
    average of the rank positions they span.  ``direction`` is
    ``higher_better`` or ``lower_better``.
    """
    if direction not in ("higher_better", "lower_better"):
        raise ValueError("direction must be 'higher_better' or 'lower_better'")
    datasets = list(scores)
    if not datasets:
        raise ValueError("no datasets to rank")
    methods = list(scores[datasets[0]])
    for ds in datasets:
        missing = [m for m in methods if m not in scores[ds]] + \
                  [m for m in scores[ds] if m not in methods]
        if missing:
            raise ValueError(f"dataset {ds!r} is missing entries for {missing}")

    per_dataset = {}
    for ds in datasets:
        values = scores[ds]
        ranks = {}
        for method in methods:
            v = values[method]
            if direction == "higher_better":
                better = sum(1 for u in values.values() if u > v)
            else:
                better = sum(1 for u in values.values() if u < v)
            tied = sum(1 for u in values.values() if u == v)
            ranks[method] = better + (tied + 1) / 2.0
        per_dataset[ds] = ranks
    averages = {m: sum(per_dataset[ds][m] for ds in datasets) / len(datasets)
                for m in methods}
    return {"per_dataset": per_dataset, "average": averages}


# ---------------------------------------------------------------------------
# text rendering

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _subscript(rank_value: float) -> str:
    if float(rank_value).is_integer():
        return str(int(rank_value)).translate(_SUBSCRIPTS)
    return f"({rank_value:g})"


def format_report_table(report: ExperimentReport) -> str:
    lines = [f"{report.config.algorithm}  runs={report.runs} folds={report.folds} seed={report.seed}"]
    for name in M.METRIC_NAMES:
        lines.append(f"  {name:<13s} {report.means[name]:.3f} ± {report.stds[name]:.3f}")
    return "\n".join(lines) + "\n"


def format_rank_table(scores: dict, direction: str, title: str = "") -> str:
    """Mean-score table with subscripted per-dataset ranks and a Rank row."""
    ranked = rank(scores, direction)
    datasets = list(scores)
    methods = list(scores[datasets[0]])
    width = max(len(m) for m in methods) + 9
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(["dataset".ljust(12)] + [m.ljust(width) for m in methods]))
    for ds in datasets:
        row = [ds.ljust(12)]
        for m in methods:
            cell = f"{scores[ds][m]:.3f}{_subscript(ranked['per_dataset'][ds][m])}"
            row.append(cell.ljust(width))
        lines.append("  ".join(row))
    rank_row = ["Rank".ljust(12)] + [f"{ranked['average'][m]:.1f}".ljust(width) for m in methods]
    lines.append("  ".join(rank_row))
    return "\n".join(lines) + "\n"
