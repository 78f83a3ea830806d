"""Label-embedded graphs: data nodes plus class nodes joined by membership edges.

Node layout (0-based internally; every export and printed id is 1-based):

* ``0 .. n-1``            training instances
* ``n .. n+m-1``          test instances
* ``n+m .. n+m+K-1``      class nodes, K = C for ``leg``/``mileg`` and
  2C for ``bileg``.

In a ``bileg`` graph label ``c`` owns two class nodes: the value-1 node
at ``n+m + 2c`` and the value-0 node at ``n+m + 2c + 1`` (0-based label
index), i.e. 1-based ids ``n+m+2c-1`` / ``n+m+2c``.  Every training node
connects to exactly one of the two for each label.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .similarity import EdgeSet, knn_convert

VARIANTS = ("leg", "mileg", "bileg")


@dataclass(frozen=True)
class LegGraph:
    num_train: int
    num_test: int
    num_labels: int
    variant: str
    sim_edges: np.ndarray   # (Es, 2) data-node pairs, i < j
    memb_edges: np.ndarray  # (Ec, 2) (train node, class node), global ids

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        object.__setattr__(self, "sim_edges", np.asarray(self.sim_edges, dtype=np.int64).reshape(-1, 2))
        object.__setattr__(self, "memb_edges", np.asarray(self.memb_edges, dtype=np.int64).reshape(-1, 2))
        nm = self.num_train + self.num_test
        if self.sim_edges.size and self.sim_edges.max() >= nm:
            raise ValueError("similarity edges may only join data nodes")
        if self.memb_edges.size:
            if self.memb_edges[:, 0].max() >= self.num_train:
                raise ValueError("membership edges start at training nodes only")
            if (self.memb_edges[:, 1].min() < nm
                    or self.memb_edges[:, 1].max() >= self.num_nodes):
                raise ValueError("membership edges end at class nodes only")

    @property
    def num_class_nodes(self) -> int:
        return self.num_labels * (2 if self.variant == "bileg" else 1)

    @property
    def num_nodes(self) -> int:
        return self.num_train + self.num_test + self.num_class_nodes

    @property
    def test_ids(self) -> np.ndarray:
        return np.arange(self.num_train, self.num_train + self.num_test, dtype=np.int64)

    @property
    def class_ids(self) -> np.ndarray:
        nm = self.num_train + self.num_test
        return np.arange(nm, nm + self.num_class_nodes, dtype=np.int64)

    @cached_property
    def _csr(self):
        # symmetric CSR over all nodes, indices sorted per row
        all_edges = np.vstack([self.sim_edges, self.memb_edges]) if len(self.memb_edges) else self.sim_edges
        src = np.concatenate([all_edges[:, 0], all_edges[:, 1]])
        dst = np.concatenate([all_edges[:, 1], all_edges[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(self.num_nodes + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return indptr, dst

    @cached_property
    def degrees(self) -> np.ndarray:
        indptr, _ = self._csr
        return np.diff(indptr)

    @cached_property
    def sim_degrees(self) -> np.ndarray:
        """Degrees counting similarity edges only (ablation support)."""
        out = np.zeros(self.num_nodes, dtype=np.int64)
        np.add.at(out, self.sim_edges.ravel(), 1)
        return out

    def neighbors(self, v: int) -> np.ndarray:
        """Adjacent node ids of ``v``, both edge kinds, sorted ascending."""
        if not 0 <= v < self.num_nodes:
            raise ValueError(f"node id {v} out of range [0, {self.num_nodes})")
        indptr, indices = self._csr
        return indices[indptr[v] : indptr[v + 1]]

    def class_degree(self, class_offset: int) -> int:
        return int(self.degrees[self.num_train + self.num_test + class_offset])

    def to_text(self) -> str:
        """Tagged 1-based edge list with a node-partition header line."""
        lines = [f"n={self.num_train} m={self.num_test} labels={self.num_labels} variant={self.variant}"]
        for i, j in self.sim_edges:
            lines.append(f"s {i + 1} {j + 1}")
        for i, c in self.memb_edges:
            lines.append(f"c {i + 1} {c + 1}")
        return "\n".join(lines) + "\n"


def _check_labels(train_y) -> np.ndarray:
    y = np.asarray(train_y)
    if y.ndim != 2:
        raise ValueError("label matrix must be 2-d")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("label matrix entries must be 0 or 1")
    return y.astype(np.uint8)


def membership_edges(variant: str, train_y: np.ndarray, num_test: int) -> np.ndarray:
    """Membership edge array for a variant given the training label matrix."""
    y = _check_labels(train_y)
    n, num_labels = y.shape
    base = n + num_test
    if variant == "leg":
        row_sums = y.sum(axis=1)
        bad = np.flatnonzero(row_sums != 1)
        if bad.size:
            raise ValueError(
                f"leg requires exactly one positive label per training row; "
                f"row {bad[0]} has {int(row_sums[bad[0]])} (use mileg for multi-label data)"
            )
        rows = np.arange(n, dtype=np.int64)
        return np.column_stack((rows, base + y.argmax(axis=1).astype(np.int64)))
    if variant == "mileg":
        rows, labels = np.nonzero(y)
        return np.column_stack((rows.astype(np.int64), base + labels.astype(np.int64)))
    if variant == "bileg":
        rows = np.repeat(np.arange(n, dtype=np.int64), num_labels)
        labels = np.tile(np.arange(num_labels, dtype=np.int64), n)
        # value-1 node at 2c, value-0 node at 2c + 1
        targets = base + 2 * labels + (1 - y.ravel().astype(np.int64))
        return np.column_stack((rows, targets))
    raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def assemble_graph(variant: str, sim_edges: EdgeSet | np.ndarray, train_y, num_test: int) -> LegGraph:
    """LegGraph from a precomputed similarity edge set and training labels."""
    pairs = sim_edges.pairs if isinstance(sim_edges, EdgeSet) else np.asarray(sim_edges, dtype=np.int64)
    y = _check_labels(train_y)
    return LegGraph(
        num_train=y.shape[0],
        num_test=num_test,
        num_labels=y.shape[1],
        variant=variant,
        sim_edges=pairs,
        memb_edges=membership_edges(variant, y, num_test),
    )


def _build(variant, train_x, train_y, test_x, similarity, k, test_test_edges, backend):
    train_x = np.asarray(train_x, dtype=np.float64)
    test_x = np.asarray(test_x, dtype=np.float64).reshape(-1, train_x.shape[1]) if np.size(test_x) else np.empty((0, train_x.shape[1]))
    n = train_x.shape[0]
    pooled = np.vstack([train_x, test_x])
    edges = knn_convert(pooled, similarity, k, backend=backend)
    if not test_test_edges:
        keep = ~((edges.pairs[:, 0] >= n) & (edges.pairs[:, 1] >= n))
        edges = EdgeSet(edges.pairs[keep])
    return assemble_graph(variant, edges, train_y, test_x.shape[0])


def build_leg(train_x, train_y, test_x, similarity, k, *, test_test_edges=True, backend=None) -> LegGraph:
    """Single-label graph: one membership edge per training node."""
    return _build("leg", train_x, train_y, test_x, similarity, k, test_test_edges, backend)


def build_mileg(train_x, train_y, test_x, similarity, k, *, test_test_edges=True, backend=None) -> LegGraph:
    """Multi-label graph: one membership edge per positive label entry."""
    return _build("mileg", train_x, train_y, test_x, similarity, k, test_test_edges, backend)


def build_bileg(train_x, train_y, test_x, similarity, k, *, test_test_edges=True, backend=None) -> LegGraph:
    """Two class nodes per label; every training node connects to one of each pair."""
    return _build("bileg", train_x, train_y, test_x, similarity, k, test_test_edges, backend)
