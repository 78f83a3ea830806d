"""Numba-compiled kernels. Mirrors ``_numpy`` semantics exactly."""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def pairwise_scores(X, metric_code):
    # 0 = euclidean, 1 = manhattan, 2 = cosine
    n, f = X.shape
    out = np.zeros((n, n))
    if metric_code == 2:
        norms = np.empty(n)
        for i in range(n):
            s = 0.0
            for t in range(f):
                s += X[i, t] * X[i, t]
            norms[i] = math.sqrt(s)
        for i in range(n):
            out[i, i] = 1.0 if norms[i] > 0.0 else 0.0
            for j in range(i + 1, n):
                if norms[i] > 0.0 and norms[j] > 0.0:
                    dot = 0.0
                    for t in range(f):
                        dot += X[i, t] * X[j, t]
                    v = dot / (norms[i] * norms[j])
                    if v > 1.0:
                        v = 1.0
                    elif v < -1.0:
                        v = -1.0
                else:
                    v = 0.0
                out[i, j] = v
                out[j, i] = v
        return out
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            if metric_code == 0:
                for t in range(f):
                    d = X[i, t] - X[j, t]
                    s += d * d
                s = math.sqrt(s)
            else:
                for t in range(f):
                    d = X[i, t] - X[j, t]
                    s += abs(d)
            out[i, j] = s
            out[j, i] = s
    return out


@njit(cache=True)
def link_scores_csr(indptr, indices, weights, row_ids, col_ids):
    m = row_ids.size
    k = col_ids.size
    out = np.zeros((m, k))
    for a in range(m):
        i = row_ids[a]
        i0 = indptr[i]
        i1 = indptr[i + 1]
        for b in range(k):
            c = col_ids[b]
            p = i0
            q = indptr[c]
            q1 = indptr[c + 1]
            s = 0.0
            while p < i1 and q < q1:
                u = indices[p]
                v = indices[q]
                if u == v:
                    s += weights[u]
                    p += 1
                    q += 1
                elif u < v:
                    p += 1
                else:
                    q += 1
            out[a, b] = s
    return out
