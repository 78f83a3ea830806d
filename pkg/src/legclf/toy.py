"""Built-in worked example with known-good score constants.

Six labeled 2-d points carrying subsets of the labels {a, b, c} plus
one query point.  The similarity edges are fixed (not recomputed from
the coordinates), and the common-neighbors scores of the query against
every class node are known exactly, which makes this the installation
smoke test: :func:`self_check` recomputes everything and compares.

Expected common-neighbors scores for the query node:

* mileg:  a=2, b=3, c=3; thresholding at raw t=3 predicts {b, c}
* bileg:  a1=2, a0=2, b1=3, b0=1, c1=3, c0=1; pairwise comparison
  also predicts {b, c}
"""

from __future__ import annotations

import numpy as np

from .classify import biculp_from_scores, miculp_from_scores
from .graph import LegGraph, assemble_graph
from .predictors import score_all

LABEL_NAMES = ("a", "b", "c")

# training points 0..5, query point 6
POINTS = np.array(
    [[1.0, 0.0], [0.0, 1.0], [1.0, 2.0], [1.0, -2.0], [0.0, 3.0], [0.0, -3.0], [0.0, -1.0]]
)

LABELS = np.array(
    [
        [1, 1, 1],
        [1, 1, 0],
        [1, 1, 0],
        [0, 1, 1],
        [1, 0, 0],
        [0, 0, 1],
    ],
    dtype=np.uint8,
)

SIM_EDGES = np.array(
    [
        [0, 1], [0, 2], [0, 3], [0, 6],
        [1, 2], [1, 4], [1, 6],
        [2, 4],
        [3, 5], [3, 6],
        [5, 6],
    ],
    dtype=np.int64,
)

MILEG_CN = {"a": 2.0, "b": 3.0, "c": 3.0}
# (value-1 node, value-0 node) per label, class-node id order
BILEG_CN = {"a": (2.0, 2.0), "b": (3.0, 1.0), "c": (3.0, 1.0)}
EXPECTED_PREDICTION = np.array([[0, 1, 1]], dtype=np.uint8)
RAW_THRESHOLD = 3.0


def build_toy_graph(variant: str) -> LegGraph:
    return assemble_graph(variant, SIM_EDGES, LABELS, num_test=1)


def query_scores(variant: str, predictor: str = "cn") -> np.ndarray:
    """Score row of the query node against every class node."""
    graph = build_toy_graph(variant)
    return score_all(graph, predictor, normalize=False).values[0]


def self_check() -> list:
    """Recompute the known constants; returns a list of mismatch strings."""
    problems = []
    mileg = query_scores("mileg")
    for idx, name in enumerate(LABEL_NAMES):
        if mileg[idx] != MILEG_CN[name]:
            problems.append(f"mileg cn score for {name}: got {mileg[idx]}, want {MILEG_CN[name]}")
    bileg = query_scores("bileg")
    for idx, name in enumerate(LABEL_NAMES):
        got = (bileg[2 * idx], bileg[2 * idx + 1])
        if got != BILEG_CN[name]:
            problems.append(f"bileg cn scores for {name}: got {got}, want {BILEG_CN[name]}")
    mi_pred = miculp_from_scores(mileg.reshape(1, -1), RAW_THRESHOLD)
    if not np.array_equal(mi_pred, EXPECTED_PREDICTION):
        problems.append(f"mileg prediction at raw t={RAW_THRESHOLD}: got {mi_pred.tolist()}")
    bi_pred = biculp_from_scores(bileg.reshape(1, -1))
    if not np.array_equal(bi_pred, EXPECTED_PREDICTION):
        problems.append(f"bileg pairwise prediction: got {bi_pred.tolist()}")
    return problems
