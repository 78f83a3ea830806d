"""Decision rules turning link scores into label predictions.

* ``culp``   single-label argmax over class-node scores.
* ``miculp`` one class node per label; predict label c when its score
  reaches the threshold t (>= by default; the strict > form is a config
  switch).  Scores are normalized per row to [0, 1] by default so t is
  comparable across test nodes.
* ``biculp`` two class nodes per label; predict label c when the
  value-1 node outscores the value-0 node, ties resolving to 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np

from .data import scale_features
from .graph import LegGraph, build_leg, build_mileg, build_bileg
from .predictors import PREDICTORS, score_all
from .similarity import SIMILARITIES

ALGORITHMS = ("culp", "miculp", "biculp")
FALLBACKS = ("none", "top1")


@dataclass(frozen=True)
class ClassifierConfig:
    """Resolved hyperparameters of one classifier run.

    ``threshold`` is required for miculp and meaningless otherwise.
    ``normalize`` controls whether miculp thresholds per-row-normalized
    scores (default) or raw ones; ``strict_threshold`` switches the
    comparison from >= to >.
    """

    algorithm: str
    k: int
    predictor: str
    similarity: str
    threshold: float | None = None
    fallback: str = "none"
    normalize: bool = True
    strict_threshold: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.predictor not in PREDICTORS:
            raise ValueError(f"predictor must be one of {PREDICTORS}, got {self.predictor!r}")
        if self.similarity not in SIMILARITIES:
            raise ValueError(f"similarity must be one of {SIMILARITIES}, got {self.similarity!r}")
        if self.fallback not in FALLBACKS:
            raise ValueError(f"fallback must be one of {FALLBACKS}, got {self.fallback!r}")
        if self.algorithm == "miculp":
            if self.threshold is None:
                raise ValueError("miculp requires a threshold")
            if self.normalize and not 0.0 <= self.threshold <= 1.0:
                raise ValueError("normalized threshold must lie in [0, 1]")
        elif self.threshold is not None:
            raise ValueError(f"threshold only applies to miculp, not {self.algorithm}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ClassifierConfig":
        return cls(**json.loads(text))


def culp_predict(graph: LegGraph, predictor: str, *, backend=None):
    """Single-label argmax prediction.

    Returns ``(labels, zero_confidence)``: for each test node the 0-based
    label index of the best-scoring class node (ties to the lowest label
    index) and a flag marking rows whose every score was 0.
    """
    _check_variant(graph, "leg")
    sm = score_all(graph, predictor, normalize=False, backend=backend)
    labels = sm.values.argmax(axis=1)
    zero_confidence = sm.values.max(axis=1) == 0
    return labels, zero_confidence


def miculp_from_scores(values: np.ndarray, threshold: float, *, strict=False,
                       fallback="none") -> np.ndarray:
    """Threshold a (num_test, C) score matrix into a binary prediction matrix."""
    pred = (values > threshold) if strict else (values >= threshold)
    pred = pred.astype(np.uint8)
    if fallback == "top1":
        empty = np.flatnonzero(pred.sum(axis=1) == 0)
        pred[empty, values[empty].argmax(axis=1)] = 1
    elif fallback != "none":
        raise ValueError(f"fallback must be one of {FALLBACKS}, got {fallback!r}")
    return pred


def miculp_predict(graph: LegGraph, predictor: str, threshold: float, *,
                   normalize=True, strict=False, fallback="none", backend=None) -> np.ndarray:
    """Binary prediction matrix from per-label score thresholding."""
    _check_variant(graph, "mileg")
    sm = score_all(graph, predictor, normalize=normalize, backend=backend)
    return miculp_from_scores(sm.values, threshold, strict=strict, fallback=fallback)


def biculp_from_scores(values: np.ndarray) -> np.ndarray:
    """Compare paired (value-1, value-0) columns; strict win predicts 1."""
    return (values[:, 0::2] > values[:, 1::2]).astype(np.uint8)


def biculp_predict(graph: LegGraph, predictor: str, *, backend=None) -> np.ndarray:
    """Binary prediction matrix from paired class-node comparison."""
    _check_variant(graph, "bileg")
    sm = score_all(graph, predictor, normalize=False, backend=backend)
    return biculp_from_scores(sm.values)


def fit_predict(train_x, train_y, test_x, config: ClassifierConfig, *,
                scale=True, test_test_edges=True, backend=None) -> np.ndarray:
    """Full pipeline: pool, scale, build the graph, score, decide.

    Always returns a binary (num_test, C) matrix; culp predictions are
    one-hot rows.  Scaling is min-max per feature over the pooled
    matrix so separate train/test files share one scale.
    """
    train_x = np.asarray(train_x, dtype=np.float64)
    test_x = np.asarray(test_x, dtype=np.float64)
    if test_x.ndim != 2 or test_x.shape[1] != train_x.shape[1]:
        raise ValueError(
            f"feature-dimension mismatch: train has {train_x.shape[1]} columns, "
            f"test has {test_x.shape[1] if test_x.ndim == 2 else '?'}"
        )
    pooled = np.vstack([train_x, test_x])
    if scale:
        pooled = scale_features(pooled)
    n = train_x.shape[0]
    sx, tx = pooled[:n], pooled[n:]
    if config.algorithm == "culp":
        graph = build_leg(sx, train_y, tx, config.similarity, config.k,
                          test_test_edges=test_test_edges, backend=backend)
        labels, _ = culp_predict(graph, config.predictor, backend=backend)
        pred = np.zeros((test_x.shape[0], np.asarray(train_y).shape[1]), dtype=np.uint8)
        pred[np.arange(labels.size), labels] = 1
        return pred
    if config.algorithm == "miculp":
        graph = build_mileg(sx, train_y, tx, config.similarity, config.k,
                            test_test_edges=test_test_edges, backend=backend)
        return miculp_predict(graph, config.predictor, config.threshold,
                              normalize=config.normalize, strict=config.strict_threshold,
                              fallback=config.fallback, backend=backend)
    graph = build_bileg(sx, train_y, tx, config.similarity, config.k,
                        test_test_edges=test_test_edges, backend=backend)
    return biculp_predict(graph, config.predictor, backend=backend)


def _check_variant(graph: LegGraph, expected: str):
    if graph.variant != expected:
        raise ValueError(f"expected a {expected} graph, got {graph.variant}")
