"""Undirected kNN similarity graph over the pooled instance matrix.

The graph layer is transductive: labeled and unlabeled instances are
pooled into one matrix and every row participates identically.  Each
node selects its ``k`` closest other rows (smallest distance for
euclidean/manhattan, largest similarity for cosine; ties broken by the
lower row index) and the edge set is the symmetric union of those
selections: ``{i, j}`` is an edge iff i picked j or j picked i.

Because the selection order does not depend on ``k``, callers sweeping
many ``k`` values should compute :func:`rank_neighbors` once and derive
each edge set with :func:`edges_from_ranking`; :func:`knn_convert` is
exactly that composition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

SIMILARITIES = ("cosine", "euclidean", "manhattan")

# cosine is a similarity (descending order); the other two are distances
_DESCENDING = {"cosine": True, "euclidean": False, "manhattan": False}


def pairwise_score(a, b, similarity: str) -> float:
    """Score a single pair of feature vectors.

    Returns a distance for euclidean/manhattan (lower = more similar)
    and a similarity in [-1, 1] for cosine (higher = more similar).
    A zero vector has cosine similarity 0 against everything.
    """
    _check_similarity(similarity)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if similarity == "euclidean":
        return float(np.sqrt(np.sum((a - b) ** 2)))
    if similarity == "manhattan":
        return float(np.sum(np.abs(a - b)))
    na = float(np.sqrt(a @ a))
    nb = float(np.sqrt(b @ b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip((a @ b) / (na * nb), -1.0, 1.0))


@dataclass(frozen=True)
class EdgeSet:
    """Undirected similarity edges as an (E, 2) array with pairs[:, 0] < pairs[:, 1].

    Pairs are unique and sorted lexicographically, so two EdgeSets over
    the same instances compare with ``np.array_equal``.
    """

    pairs: np.ndarray

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        if pairs.size and not (pairs[:, 0] < pairs[:, 1]).all():
            raise ValueError("edge pairs must satisfy i < j")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return self.pairs.shape[0]

    def __contains__(self, pair) -> bool:
        i, j = (int(pair[0]), int(pair[1])) if pair[0] < pair[1] else (int(pair[1]), int(pair[0]))
        return bool(((self.pairs[:, 0] == i) & (self.pairs[:, 1] == j)).any())

    def degrees(self, num_nodes: int) -> np.ndarray:
        return np.bincount(self.pairs.ravel(), minlength=num_nodes)

    def to_text(self) -> str:
        """Edge list export, one ``i j`` pair per line, 1-based, i < j."""
        return "".join(f"{i + 1} {j + 1}\n" for i, j in self.pairs)


def rank_neighbors(X, similarity: str, limit: int | None = None, backend=None) -> np.ndarray:
    """Neighbor ids of every row, most similar first, self excluded.

    Ties are broken by ascending row index.  ``limit`` truncates each
    row to its first ``limit`` neighbors (enough for any k <= limit).
    """
    _check_similarity(similarity)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need a 2-d matrix with at least 2 rows")
    n = X.shape[0]
    scores = kernels.pairwise_scores(X, similarity, backend=backend)
    key = -scores if _DESCENDING[similarity] else scores.copy()
    np.fill_diagonal(key, np.inf)
    # stable sort on the key yields ascending-index order within ties
    order = np.argsort(key, axis=1, kind="stable")
    stop = n - 1 if limit is None else min(limit, n - 1)
    return order[:, :stop].astype(np.int64)


def edges_from_ranking(ranking: np.ndarray, k: int) -> EdgeSet:
    """Symmetric-union edge set from the first ``k`` picks of each row."""
    n, avail = ranking.shape
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > avail:
        raise ValueError(f"ranking holds only {avail} neighbors per row, need k={k}")
    picks = ranking[:, :k]
    src = np.repeat(np.arange(n, dtype=np.int64), k)
    dst = picks.ravel()
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    keys = np.unique(lo * np.int64(n) + hi)
    return EdgeSet(np.column_stack((keys // n, keys % n)))


def knn_convert(X, similarity: str, k: int, backend=None) -> EdgeSet:
    """Undirected kNN conversion of the pooled instance matrix."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if k >= n:
        raise ValueError(f"k={k} must be smaller than the instance count {n}")
    return edges_from_ranking(rank_neighbors(X, similarity, limit=k, backend=backend), k)


def _check_similarity(similarity: str):
    if similarity not in SIMILARITIES:
        raise ValueError(f"similarity must be one of {SIMILARITIES}, got {similarity!r}")
