"""Multi-label classification via link prediction on label-embedded kNN graphs."""

__version__ = "0.1.0"

from .classify import (
    ClassifierConfig,
    biculp_predict,
    culp_predict,
    fit_predict,
    miculp_predict,
)
from .data import Dataset, FoldPlan, Split, load_dataset, make_folds, save_csv, scale_features, split
from .graph import LegGraph, assemble_graph, build_bileg, build_leg, build_mileg
from .harness import ExperimentReport, TuningGrid, evaluate, rank, tune
from .metrics import MetricReport, compute_all, example_f1, hamming_loss, macro_f1, micro_f1
from .predictors import ScoreMatrix, neighborhood, register_predictor, score, score_all
from .similarity import EdgeSet, knn_convert, pairwise_score, rank_neighbors

__all__ = [
    "ClassifierConfig", "Dataset", "EdgeSet", "ExperimentReport", "FoldPlan",
    "LegGraph", "MetricReport", "ScoreMatrix", "Split", "TuningGrid",
    "assemble_graph", "biculp_predict", "build_bileg", "build_leg", "build_mileg",
    "compute_all", "culp_predict", "evaluate", "example_f1", "fit_predict",
    "hamming_loss", "knn_convert", "load_dataset", "macro_f1", "make_folds",
    "micro_f1", "miculp_predict", "neighborhood", "pairwise_score", "rank",
    "rank_neighbors", "register_predictor", "save_csv", "scale_features",
    "score", "score_all", "split", "tune",
]
