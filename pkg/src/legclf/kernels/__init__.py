"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Two kernel families live here:

* pairwise scores between all instance rows (euclidean / manhattan
  distances, cosine similarity), and
* link-prediction scores between node neighborhoods stored in CSR form.

Backend selection: the ``LEGCLF_KERNELS`` environment variable picks
``numba``, ``numpy``, or ``auto`` (default).  In ``auto`` mode the
numba path is used where it actually wins (see
``benchmarks/bench_kernels.py``): manhattan distances on large inputs
(~50x over the numpy broadcast) and large CSR sweeps.  Euclidean and
cosine reduce to BLAS matrix products, which beat a compiled scalar
loop at every size, so auto keeps them on numpy; small problems also
stay on numpy because JIT warm-up would dominate.  Every public
function accepts ``backend=`` for explicit control, which is how the
test suite and the benchmark pin a path.

Both paths compute the same quantities; float results may differ in the
last ulps because summation order differs.
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy

try:
    from . import _numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    _HAVE_NUMBA = False

_ENV_VAR = "LEGCLF_KERNELS"
_VALID_BACKENDS = ("auto", "numba", "numpy")

# auto mode: below these work sizes the numpy path wins once JIT
# compilation is accounted for.
_PAIRWISE_MIN_WORK = 5_000_000
_SCORES_MIN_WORK = 200_000

METRIC_CODES = {"euclidean": 0, "manhattan": 1, "cosine": 2}


def _env_backend() -> str:
    value = os.environ.get(_ENV_VAR, "auto").lower()
    if value not in _VALID_BACKENDS:
        raise ValueError(
            f"{_ENV_VAR} must be one of {_VALID_BACKENDS}, got {value!r}"
        )
    return value


def _resolve(backend, numba_wins: bool) -> str:
    choice = backend if backend is not None else _env_backend()
    if choice not in _VALID_BACKENDS:
        raise ValueError(f"backend must be one of {_VALID_BACKENDS}, got {choice!r}")
    if choice == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    if choice == "auto":
        choice = "numba" if (_HAVE_NUMBA and numba_wins) else "numpy"
    return choice


def pairwise_scores(X: np.ndarray, metric: str, backend: str | None = None) -> np.ndarray:
    """All-pairs score matrix for the rows of ``X``.

    Euclidean and manhattan return distances (lower = closer); cosine
    returns similarities in [-1, 1] (higher = closer).  Rows with zero
    norm get cosine similarity 0 against everything.
    """
    if metric not in METRIC_CODES:
        raise ValueError(f"unknown metric {metric!r}")
    X = np.ascontiguousarray(X, dtype=np.float64)
    n, f = X.shape
    # numba only pays off where numpy lacks a BLAS formulation
    wins = metric == "manhattan" and n * n * max(f, 1) >= _PAIRWISE_MIN_WORK
    which = _resolve(backend, wins)
    if which == "numba":
        return _numba.pairwise_scores(X, METRIC_CODES[metric])
    return _numpy.pairwise_scores(X, metric)


def link_scores(
    indptr: np.ndarray,
    indices: np.ndarray,
    weights: np.ndarray,
    row_ids: np.ndarray,
    col_ids: np.ndarray,
    backend: str | None = None,
) -> np.ndarray:
    """Weighted common-neighbor sums for every (row, col) node pair.

    ``indptr``/``indices`` hold the whole graph adjacency in CSR form with
    each row's indices sorted ascending.  Entry (a, b) of the result is
    ``sum(weights[z] for z in N(row_ids[a]) & N(col_ids[b]))``; with unit
    weights that is the common-neighbor count.
    """
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    row_ids = np.ascontiguousarray(row_ids, dtype=np.int64)
    col_ids = np.ascontiguousarray(col_ids, dtype=np.int64)
    # dense rows get expensive once the graph is large; CSR intersection stays flat
    wins = indices.size * max(col_ids.size, 1) >= _SCORES_MIN_WORK
    which = _resolve(backend, wins)
    if which == "numba":
        return _numba.link_scores_csr(indptr, indices, weights, row_ids, col_ids)
    n_nodes = indptr.size - 1
    return _numpy.link_scores_dense(indptr, indices, weights, row_ids, col_ids, n_nodes)


def active_backend(kind: str = "pairwise", work: int = 0, metric: str = "manhattan") -> str:
    """Backend that would be chosen for a given work size (introspection)."""
    if kind == "pairwise":
        wins = metric == "manhattan" and work >= _PAIRWISE_MIN_WORK
    else:
        wins = work >= _SCORES_MIN_WORK
    return _resolve(None, wins)


__all__ = ["pairwise_scores", "link_scores", "active_backend", "METRIC_CODES"]
