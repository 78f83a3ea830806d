"""Published benchmark results used for cross-method rank tables.

Competing methods (ACkELo, MLWSE-L2, BOOMER) are not re-run here; their
reported scores on the five benchmark datasets are transcribed constants,
as are the reported MiCULP/BiCULP numbers they are ranked against.
Values are mean scores over repeated 10-fold cross validation.
"""

DATASETS = ("birds", "emotions", "enron", "flags", "scene")
METHODS = ("MiCULP", "BiCULP", "ACkELo", "MLWSE-L2", "BOOMER")

REPORTED = {
    "hamming_loss": {
        "birds":    {"MiCULP": 0.050, "BiCULP": 0.047, "ACkELo": 0.040, "MLWSE-L2": 0.045, "BOOMER": 0.041},
        "emotions": {"MiCULP": 0.188, "BiCULP": 0.175, "ACkELo": 0.199, "MLWSE-L2": 0.193, "BOOMER": 0.189},
        "enron":    {"MiCULP": 0.051, "BiCULP": 0.048, "ACkELo": 0.057, "MLWSE-L2": 0.046, "BOOMER": 0.047},
        "flags":    {"MiCULP": 0.288, "BiCULP": 0.264, "ACkELo": 0.268, "MLWSE-L2": 0.257, "BOOMER": 0.240},
        "scene":    {"MiCULP": 0.070, "BiCULP": 0.073, "ACkELo": 0.079, "MLWSE-L2": 0.085, "BOOMER": 0.081},
    },
    "example_f1": {
        "birds":    {"MiCULP": 0.547, "BiCULP": 0.608, "ACkELo": 0.149, "MLWSE-L2": 0.140, "BOOMER": 0.619},
        "emotions": {"MiCULP": 0.683, "BiCULP": 0.654, "ACkELo": 0.718, "MLWSE-L2": 0.614, "BOOMER": 0.607},
        "enron":    {"MiCULP": 0.579, "BiCULP": 0.503, "ACkELo": 0.437, "MLWSE-L2": 0.576, "BOOMER": 0.493},
        "flags":    {"MiCULP": 0.728, "BiCULP": 0.712, "ACkELo": 0.736, "MLWSE-L2": 0.721, "BOOMER": 0.720},
        "scene":    {"MiCULP": 0.805, "BiCULP": 0.738, "ACkELo": 0.788, "MLWSE-L2": 0.672, "BOOMER": 0.652},
    },
    "micro_f1": {
        "birds":    {"MiCULP": 0.418, "BiCULP": 0.437, "ACkELo": 0.408, "MLWSE-L2": 0.359, "BOOMER": 0.421},
        "emotions": {"MiCULP": 0.704, "BiCULP": 0.698, "ACkELo": 0.715, "MLWSE-L2": 0.658, "BOOMER": 0.667},
        "enron":    {"MiCULP": 0.576, "BiCULP": 0.521, "ACkELo": 0.443, "MLWSE-L2": 0.566, "BOOMER": 0.537},
        "flags":    {"MiCULP": 0.740, "BiCULP": 0.731, "ACkELo": 0.733, "MLWSE-L2": 0.737, "BOOMER": 0.751},
        "scene":    {"MiCULP": 0.794, "BiCULP": 0.774, "ACkELo": 0.777, "MLWSE-L2": 0.733, "BOOMER": 0.739},
    },
    "macro_f1": {
        "birds":    {"MiCULP": 0.351, "BiCULP": 0.352, "ACkELo": 0.283, "MLWSE-L2": 0.133, "BOOMER": 0.331},
        "emotions": {"MiCULP": 0.688, "BiCULP": 0.667, "ACkELo": 0.701, "MLWSE-L2": 0.584, "BOOMER": 0.641},
        "enron":    {"MiCULP": 0.298, "BiCULP": 0.301, "ACkELo": 0.115, "MLWSE-L2": 0.547, "BOOMER": 0.272},
        "flags":    {"MiCULP": 0.630, "BiCULP": 0.605, "ACkELo": 0.640, "MLWSE-L2": 0.711, "BOOMER": 0.648},
        "scene":    {"MiCULP": 0.800, "BiCULP": 0.782, "ACkELo": 0.782, "MLWSE-L2": 0.665, "BOOMER": 0.742},
    },
}
