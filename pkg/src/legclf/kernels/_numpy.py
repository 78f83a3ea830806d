"""Pure-numpy reference implementations of the hot kernels."""

from __future__ import annotations

import numpy as np

# row-block size for the manhattan broadcast; keeps the temporary under
# ~100 MB for a few thousand instances
_BLOCK = 64


def pairwise_scores(X: np.ndarray, metric: str) -> np.ndarray:
    if metric == "euclidean":
        return _euclidean(X)
    if metric == "manhattan":
        return _manhattan(X)
    return _cosine(X)


def _euclidean(X):
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(d2)

def _manhattan(X):
    n = X.shape[0]
    out = np.empty((n, n))
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        out[start:stop] = np.abs(X[start:stop, None, :] - X[None, :, :]).sum(axis=2)
    return out

def _cosine(X):
    norms = np.sqrt(np.einsum("ij,ij->i", X, X))
    safe = np.where(norms > 0.0, norms, 1.0)
    Xn = X / safe[:, None]
    sims = Xn @ Xn.T
    np.clip(sims, -1.0, 1.0, out=sims)
    return sims


def link_scores_dense(indptr, indices, weights, row_ids, col_ids, n_nodes):
    rows = _rows_dense(indptr, indices, row_ids, n_nodes)
    cols = _rows_dense(indptr, indices, col_ids, n_nodes)
    return (rows * weights[None, :]) @ cols.T


def _rows_dense(indptr, indices, ids, n_nodes):
    out = np.zeros((ids.size, n_nodes))
    for a, v in enumerate(ids):
        out[a, indices[indptr[v] : indptr[v + 1]]] = 1.0
    return out
