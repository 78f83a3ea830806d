"""Multi-label evaluation measures over binary label matrices.

Zero-division conventions, applied uniformly and relied on by the rest
of the package (rare labels in benchmark data hit all of these):

* example F1: a row with empty true AND predicted label sets scores 1
* micro F1: defined as 1 when the pooled denominator is 0
* macro F1: a label with no true or predicted positives contributes 0
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

METRIC_NAMES = ("hamming_loss", "example_f1", "micro_f1", "macro_f1")

# larger is better for everything except hamming loss
HIGHER_IS_BETTER = {
    "hamming_loss": False,
    "example_f1": True,
    "micro_f1": True,
    "macro_f1": True,
}


@dataclass(frozen=True)
class MetricReport:
    hamming_loss: float
    example_f1: float
    micro_f1: float
    macro_f1: float
    per_label_f1: tuple

    def to_dict(self) -> dict:
        return {
            "hamming_loss": self.hamming_loss,
            "example_f1": self.example_f1,
            "micro_f1": self.micro_f1,
            "macro_f1": self.macro_f1,
            "per_label_f1": list(self.per_label_f1),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _validate(y_true, y_pred):
    a = np.asarray(y_true)
    b = np.asarray(y_pred)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.ndim != 2:
        raise ValueError("expected 2-d label matrices")
    for name, mat in (("y_true", a), ("y_pred", b)):
        if not np.isin(mat, (0, 1)).all():
            raise ValueError(f"{name} must be binary")
    return a.astype(np.int64), b.astype(np.int64)


def hamming_loss(y_true, y_pred) -> float:
    """Fraction of label cells that disagree."""
    a, b = _validate(y_true, y_pred)
    return float(np.mean(a != b))


def example_f1(y_true, y_pred) -> float:
    """Per-instance F1 of the predicted vs true label sets, averaged."""
    a, b = _validate(y_true, y_pred)
    inter = (a & b).sum(axis=1)
    sizes = a.sum(axis=1) + b.sum(axis=1)
    terms = np.where(sizes > 0, 2.0 * inter / np.where(sizes > 0, sizes, 1), 1.0)
    return float(terms.mean())


def micro_f1(y_true, y_pred) -> float:
    """F1 from TP/FP/FN pooled over every cell."""
    a, b = _validate(y_true, y_pred)
    tp = int((a & b).sum())
    fp = int(((1 - a) & b).sum())
    fn = int((a & (1 - b)).sum())
    denom = 2 * tp + fp + fn
    return 1.0 if denom == 0 else 2.0 * tp / denom


def macro_f1(y_true, y_pred):
    """Unweighted mean of per-label F1; returns (macro, per_label vector)."""
    a, b = _validate(y_true, y_pred)
    tp = (a & b).sum(axis=0)
    fp = ((1 - a) & b).sum(axis=0)
    fn = (a & (1 - b)).sum(axis=0)
    denom = 2 * tp + fp + fn
    per_label = np.where(denom > 0, 2.0 * tp / np.where(denom > 0, denom, 1), 0.0)
    return float(per_label.mean()), per_label


def compute_all(y_true, y_pred) -> MetricReport:
    macro, per_label = macro_f1(y_true, y_pred)
    return MetricReport(
        hamming_loss=hamming_loss(y_true, y_pred),
        example_f1=example_f1(y_true, y_pred),
        micro_f1=micro_f1(y_true, y_pred),
        macro_f1=macro,
        per_label_f1=tuple(float(v) for v in per_label),
    )
