"""Pairwise scores and the undirected kNN conversion against brute force."""

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from legclf.similarity import (
    EdgeSet,
    edges_from_ranking,
    knn_convert,
    pairwise_score,
    rank_neighbors,
)


def brute_force_edges(X, similarity, k):
    """Independent oracle: scipy distances + full stable sort + set union."""
    n = X.shape[0]
    if similarity == "cosine":
        norms = np.linalg.norm(X, axis=1, keepdims=True)
        Xn = np.divide(X, norms, out=np.zeros_like(X), where=norms > 0)
        key = -(Xn @ Xn.T)
    else:
        key = cdist(X, X, metric="euclidean" if similarity == "euclidean" else "cityblock")
    edges = set()
    for i in range(n):
        order = sorted((j for j in range(n) if j != i), key=lambda j: (key[i, j], j))
        for j in order[:k]:
            edges.add((min(i, j), max(i, j)))
    return sorted(edges)


# -- pairwise_score ---------------------------------------------------------

def test_euclidean_345_triangle():
    assert pairwise_score((0, 0), (3, 4), "euclidean") == 5.0


def test_cosine_identical_direction():
    assert pairwise_score((1, 0), (1, 0), "cosine") == 1.0


def test_manhattan_hand_sum():
    assert pairwise_score((1, 2, 3), (2, 0, 5), "manhattan") == 5.0


def test_cosine_zero_vector_is_zero():
    assert pairwise_score((0, 0), (1, 2), "cosine") == 0.0
    assert pairwise_score((0, 0), (0, 0), "cosine") == 0.0


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        pairwise_score((1, 2), (1, 2, 3), "euclidean")


def test_unknown_similarity():
    with pytest.raises(ValueError, match="similarity"):
        pairwise_score((1,), (1,), "hamming")


# -- knn_convert ------------------------------------------------------------

def test_three_points_on_a_line():
    X = np.array([[0.0], [1.0], [10.0]])
    es = knn_convert(X, "euclidean", 1)
    assert es.pairs.tolist() == [[0, 1], [1, 2]]


def test_full_k_gives_complete_graph():
    rng = np.random.default_rng(0)
    X = rng.normal(0, 1, (7, 3))
    es = knn_convert(X, "euclidean", 6)
    assert len(es) == 7 * 6 // 2


def test_k_too_large_rejected():
    with pytest.raises(ValueError, match="k=3"):
        knn_convert(np.zeros((3, 2)) + np.arange(3)[:, None], "euclidean", 3)


def test_matches_brute_force_oracle():
    for seed in range(15):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 50))
        X = rng.normal(0, 3, (n, 5))
        k = int(rng.integers(1, min(n - 1, 8) + 1))
        for sim in ("euclidean", "manhattan", "cosine"):
            got = knn_convert(X, sim, k).pairs.tolist()
            want = [list(p) for p in brute_force_edges(X, sim, k)]
            assert got == want, (seed, sim, k)


def test_degree_lower_bound_and_symmetry():
    rng = np.random.default_rng(5)
    X = rng.normal(0, 1, (30, 4))
    k = 4
    es = knn_convert(X, "euclidean", k)
    deg = es.degrees(30)
    assert (deg >= k).all()
    seen = set(map(tuple, es.pairs.tolist()))
    assert len(seen) == len(es)  # no duplicates; single stored representation
    assert all(i < j for i, j in seen)


def test_permutation_equivariance():
    rng = np.random.default_rng(9)
    X = rng.normal(0, 1, (20, 3))  # random floats: all pairwise scores distinct
    k = 3
    base = {tuple(p) for p in knn_convert(X, "euclidean", k).pairs.tolist()}
    perm = rng.permutation(20)
    permuted = knn_convert(X[perm], "euclidean", k)
    mapped = {(min(perm[i], perm[j]), max(perm[i], perm[j]))
              for i, j in permuted.pairs.tolist()}
    assert mapped == base


def test_tie_break_prefers_lower_index():
    # point 0 is equidistant from 1 and 2; its first pick must be index 1
    X = np.array([[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [5.0, 5.0], [-1.5, 0.0]])
    ranking = rank_neighbors(X, "euclidean")
    assert ranking[0].tolist() == [1, 2, 4, 3]
    # node 2 pairs off with node 4, so {0,2} only exists if 0 picked 2
    es = knn_convert(X, "euclidean", 1)
    assert [0, 1] in es.pairs.tolist()
    assert [0, 2] not in es.pairs.tolist()


def test_ranking_prefix_matches_direct_conversion():
    rng = np.random.default_rng(2)
    X = rng.normal(0, 1, (25, 4))
    ranking = rank_neighbors(X, "manhattan", limit=10)
    for k in (1, 3, 7, 10):
        via_ranking = edges_from_ranking(ranking, k)
        direct = knn_convert(X, "manhattan", k)
        assert np.array_equal(via_ranking.pairs, direct.pairs)


def test_edge_set_validation_and_export():
    with pytest.raises(ValueError, match="i < j"):
        EdgeSet(np.array([[2, 1]]))
    es = EdgeSet(np.array([[0, 1], [1, 4]]))
    assert es.to_text() == "1 2\n2 5\n"
    assert (0, 1) in es and (4, 1) in es and (0, 4) not in es
