"""Local link-prediction indices between test nodes and class nodes.

Three indices over the shared neighborhood of a test node i and a class
node c:

* ``cn``  common neighbors            |N(i) & N(c)|
* ``aa``  Adamic-Adar                 sum 1/ln(deg(z)) over shared z
* ``ra``  resource allocation         sum 1/deg(z) over shared z

Degrees count both edge kinds by default (the graph is scored as one
undirected graph); ``membership_degrees=False`` restricts the degree
term to similarity edges as an ablation.  Natural log for Adamic-Adar:
the base only rescales scores, and downstream decisions compare scores
against each other or a normalized threshold.

``score`` is a deliberately plain set-based implementation; ``score_all``
goes through the compiled kernels.  The test suite holds the two paths
against each other and against an independent oracle.

The predictor registry is extensible: ``register_predictor`` adds a new
index by name (a compatibility-score style predictor can be plugged in
without touching this module).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .graph import LegGraph

PREDICTORS = ("cn", "aa", "ra")

# name -> weight(degree) for one shared neighbor; None means unit weight
_WEIGHT_FNS: dict[str, Callable[[float], float] | None] = {
    "cn": None,
    "aa": lambda d: 1.0 / math.log(d) if d > 1.0 else 0.0,
    "ra": lambda d: 1.0 / d if d > 0.0 else 0.0,
}


def register_predictor(name: str, weight_fn: Callable[[float], float]):
    """Register an additional degree-weighted common-neighbor index."""
    if name in _WEIGHT_FNS:
        raise ValueError(f"predictor {name!r} already registered")
    _WEIGHT_FNS[name] = weight_fn


@dataclass(frozen=True)
class ScoreMatrix:
    """Per-test-node scores against every class node.

    Columns follow class-node id order: label order for leg/mileg, and
    (value-1 node, value-0 node) per label for bileg.
    """

    values: np.ndarray
    normalized: bool

    @property
    def num_test(self) -> int:
        return self.values.shape[0]

    def to_csv(self, test_ids=None) -> str:
        lines = []
        for row_idx in range(self.values.shape[0]):
            ident = str(test_ids[row_idx]) if test_ids is not None else str(row_idx)
            vals = ",".join(repr(float(v)) for v in self.values[row_idx])
            lines.append(f"{ident},{vals}")
        return "\n".join(lines) + ("\n" if lines else "")


def neighborhood(graph: LegGraph, v: int) -> np.ndarray:
    """All adjacent nodes of ``v``, both edge provenances, sorted."""
    return graph.neighbors(v)


def _degree_vector(graph: LegGraph, membership_degrees: bool) -> np.ndarray:
    return (graph.degrees if membership_degrees else graph.sim_degrees).astype(np.float64)


def _weights(graph: LegGraph, predictor: str, membership_degrees: bool) -> np.ndarray:
    try:
        fn = _WEIGHT_FNS[predictor]
    except KeyError:
        raise ValueError(f"unknown predictor {predictor!r}; registered: {sorted(_WEIGHT_FNS)}") from None
    if fn is None:
        return np.ones(graph.num_nodes)
    deg = _degree_vector(graph, membership_degrees)
    return np.array([fn(d) for d in deg])


def score(graph: LegGraph, i: int, c: int, predictor: str, *, membership_degrees=True) -> float:
    """Link-prediction score for one (test node, class node) pair."""
    nm = graph.num_train + graph.num_test
    if not nm - graph.num_test <= i < nm:
        raise ValueError(f"node {i} is not a test node")
    if not nm <= c < graph.num_nodes:
        raise ValueError(f"node {c} is not a class node")
    shared = set(graph.neighbors(i).tolist()) & set(graph.neighbors(c).tolist())
    fn = _WEIGHT_FNS.get(predictor)
    if predictor not in _WEIGHT_FNS:
        raise ValueError(f"unknown predictor {predictor!r}")
    if fn is None:
        return float(len(shared))
    deg = _degree_vector(graph, membership_degrees)
    return float(sum(fn(deg[z]) for z in shared))


def score_all(graph: LegGraph, predictor: str, *, normalize=False,
              membership_degrees=True, backend=None) -> ScoreMatrix:
    """Score every test node against every class node.

    With ``normalize`` each row is divided by its max; all-zero rows are
    left untouched, so the per-row argmax set is unchanged either way.
    """
    if graph.num_test < 1:
        raise ValueError("graph has no test nodes to score")
    w = _weights(graph, predictor, membership_degrees)
    indptr, indices = graph._csr
    values = kernels.link_scores(indptr, indices, w, graph.test_ids, graph.class_ids,
                                 backend=backend)
    if normalize:
        row_max = values.max(axis=1, keepdims=True)
        np.divide(values, row_max, out=values, where=row_max > 0)
    return ScoreMatrix(values=values, normalized=normalize)
