"""Evaluation measures against an independent confusion-matrix oracle."""

import numpy as np
import pytest

from legclf.metrics import (
    MetricReport,
    compute_all,
    example_f1,
    hamming_loss,
    macro_f1,
    micro_f1,
)


def oracle_metrics(Y, P):
    """Plain-python loops; same declared zero-division conventions."""
    m, C = len(Y), len(Y[0])
    mismatches = sum(1 for i in range(m) for c in range(C) if Y[i][c] != P[i][c])
    ham = mismatches / (m * C)

    ex_terms = []
    for i in range(m):
        true = {c for c in range(C) if Y[i][c]}
        pred = {c for c in range(C) if P[i][c]}
        if not true and not pred:
            ex_terms.append(1.0)
        else:
            ex_terms.append(2 * len(true & pred) / (len(true) + len(pred)))
    ex = sum(ex_terms) / m

    tp = sum(1 for i in range(m) for c in range(C) if Y[i][c] and P[i][c])
    fp = sum(1 for i in range(m) for c in range(C) if not Y[i][c] and P[i][c])
    fn = sum(1 for i in range(m) for c in range(C) if Y[i][c] and not P[i][c])
    micro = 1.0 if 2 * tp + fp + fn == 0 else 2 * tp / (2 * tp + fp + fn)

    per_label = []
    for c in range(C):
        tp_c = sum(1 for i in range(m) if Y[i][c] and P[i][c])
        fp_c = sum(1 for i in range(m) if not Y[i][c] and P[i][c])
        fn_c = sum(1 for i in range(m) if Y[i][c] and not P[i][c])
        denom = 2 * tp_c + fp_c + fn_c
        per_label.append(0.0 if denom == 0 else 2 * tp_c / denom)
    macro = sum(per_label) / C
    return ham, ex, micro, macro, per_label


# -- hand-checked values ----------------------------------------------------

def test_hamming_perfect_and_complement():
    Y = np.array([[1, 0], [0, 1]])
    assert hamming_loss(Y, Y) == 0.0
    assert hamming_loss(Y, 1 - Y) == 1.0


def test_hamming_single_mismatch():
    assert hamming_loss([[1, 0], [0, 1]], [[1, 1], [0, 1]]) == 0.25


def test_example_f1_cases():
    assert example_f1([[0, 1, 1]], [[0, 1, 1]]) == 1.0
    assert example_f1([[1, 0]], [[0, 1]]) == 0.0
    assert example_f1([[1, 1, 1]], [[0, 1, 1]]) == pytest.approx(0.8)


def test_micro_f1_cases():
    Y = np.array([[1, 0], [0, 1]])
    assert micro_f1(Y, Y) == 1.0
    assert micro_f1(Y, [[1, 1], [0, 1]]) == pytest.approx(0.8)
    assert micro_f1(np.zeros((3, 2), int), np.zeros((3, 2), int)) == 1.0


def test_macro_f1_cases():
    Y = np.array([[1, 0], [1, 0]])
    macro, per_label = macro_f1(Y, Y)
    assert macro == 0.5  # label 2 never positive -> contributes 0
    assert per_label.tolist() == [1.0, 0.0]
    full = np.array([[1, 0], [0, 1]])
    assert macro_f1(full, full)[0] == 1.0


def test_empty_row_convention():
    Y = np.array([[0, 0], [1, 0]])
    P = np.array([[0, 0], [1, 0]])
    assert example_f1(Y, P) == 1.0


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError, match="shape mismatch"):
        hamming_loss(np.zeros((2, 2), int), np.zeros((2, 3), int))


def test_non_binary_rejected():
    with pytest.raises(ValueError, match="binary"):
        micro_f1([[0, 2]], [[0, 1]])


# -- oracle and invariants ---------------------------------------------------

def test_random_pairs_match_oracle():
    for seed in range(30):
        rng = np.random.default_rng(seed)
        m = int(rng.integers(1, 50))
        C = int(rng.integers(1, 10))
        Y = (rng.random((m, C)) < rng.uniform(0.1, 0.9)).astype(int)
        P = (rng.random((m, C)) < rng.uniform(0.1, 0.9)).astype(int)
        if seed % 4 == 0:
            Y[:, 0] = 0
            P[:, 0] = 0  # force dead-label and empty-row branches
        ham, ex, micro, macro, per_label = oracle_metrics(Y.tolist(), P.tolist())
        assert hamming_loss(Y, P) == pytest.approx(ham, abs=1e-12)
        assert example_f1(Y, P) == pytest.approx(ex, abs=1e-12)
        assert micro_f1(Y, P) == pytest.approx(micro, abs=1e-12)
        got_macro, got_per = macro_f1(Y, P)
        assert got_macro == pytest.approx(macro, abs=1e-12)
        assert got_per.tolist() == pytest.approx(per_label, abs=1e-12)


def test_symmetry_and_permutation_invariance():
    rng = np.random.default_rng(7)
    Y = (rng.random((20, 5)) < 0.4).astype(int)
    P = (rng.random((20, 5)) < 0.4).astype(int)
    assert hamming_loss(Y, P) == hamming_loss(P, Y)
    perm = rng.permutation(20)
    report = compute_all(Y, P)
    permuted = compute_all(Y[perm], P[perm])
    assert report == permuted


def test_outputs_bounded():
    rng = np.random.default_rng(8)
    for seed in range(20):
        Y = (rng.random((10, 4)) < 0.5).astype(int)
        P = (rng.random((10, 4)) < 0.5).astype(int)
        r = compute_all(Y, P)
        for v in (r.hamming_loss, r.example_f1, r.micro_f1, r.macro_f1, *r.per_label_f1):
            assert 0.0 <= v <= 1.0


def test_macro_is_mean_of_per_label():
    rng = np.random.default_rng(9)
    Y = (rng.random((15, 6)) < 0.3).astype(int)
    P = (rng.random((15, 6)) < 0.3).astype(int)
    r = compute_all(Y, P)
    assert r.macro_f1 == pytest.approx(np.mean(r.per_label_f1), abs=1e-12)


def test_report_json_field_names():
    r = MetricReport(0.1, 0.9, 0.8, 0.7, (0.7, 0.7))
    d = r.to_dict()
    assert list(d) == ["hamming_loss", "example_f1", "micro_f1", "macro_f1", "per_label_f1"]
    assert "\"hamming_loss\"" in r.to_json()
