import numpy as np
import pytest

from legclf.data import Dataset


def random_dataset(seed, n=40, f=5, labels=4, density=0.35, clusters=False):
    """Seeded synthetic dataset; with clusters=True labels follow geometry."""
    rng = np.random.default_rng(seed)
    if clusters:
        centers = rng.normal(0, 6, (labels, f))
        member = rng.integers(0, labels, n)
        X = centers[member] + rng.normal(0, 1.0, (n, f))
        Y = np.zeros((n, labels), dtype=np.uint8)
        Y[np.arange(n), member] = 1
        extra = rng.random((n, labels)) < 0.15
        Y |= extra.astype(np.uint8)
    else:
        X = rng.normal(0, 1, (n, f))
        Y = (rng.random((n, labels)) < density).astype(np.uint8)
    return Dataset(features=X, labels=Y,
                   label_names=tuple(f"l{i}" for i in range(labels)))


def random_graph_parts(seed, max_nodes=40, max_labels=5):
    """Random training labels + sim edges for predictor tests."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, max_nodes - 2))
    m = int(rng.integers(1, 4))
    C = int(rng.integers(1, max_labels + 1))
    Y = (rng.random((n, C)) < 0.4).astype(np.uint8)
    total = n + m
    density = rng.uniform(0.1, 0.5)
    pairs = [(i, j) for i in range(total) for j in range(i + 1, total)
             if rng.random() < density]
    edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    return n, m, C, Y, edges


@pytest.fixture
def clustered_dataset():
    return random_dataset(11, n=60, f=4, labels=3, clusters=True)
