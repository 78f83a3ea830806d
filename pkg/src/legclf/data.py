"""Dataset model, ingestion, and stratified fold assignment.

Two input formats:

* a documented ARFF subset (``@relation``, ``@attribute <name>
  numeric|real|integer|{v1,...}``, dense ``@data`` rows) with the label
  attribute names taken from a MULAN-style XML sibling file
  (``<label name="..."/>``) or passed explicitly, and
* CSV with a header row where columns prefixed ``label:`` are labels and
  every other column is a numeric feature.

Nominal attributes with three or more values are one-hot encoded in
declaration order; two-valued nominals map onto a single 0/1 column.
Missing values ('?' or empty cells) are rejected with the offending
row/column named.  Feature matrices are stored raw; min-max scaling is
applied by the classifier pipeline over the pooled train+test matrix
(see :func:`scale_features`).
"""

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

import numpy as np

FORMATS = ("mulan-arff", "csv")


class DatasetError(ValueError):
    """Base class for ingestion failures."""


class MalformedHeaderError(DatasetError):
    pass


class UnknownAttributeTypeError(DatasetError):
    pass


class NonBinaryLabelError(DatasetError):
    pass


class MissingValueError(DatasetError):
    pass


class EmptyDatasetError(DatasetError):
    pass


class MissingLabelListError(DatasetError):
    pass


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus the binary label matrix of its labeled prefix.

    ``features`` has one row per instance (labeled rows first); ``labels``
    covers only the first ``num_labeled`` rows.  ``attribute_names`` are
    the source attributes before nominal encoding; ``feature_names`` name
    the encoded columns.
    """

    features: np.ndarray
    labels: np.ndarray
    label_names: tuple
    feature_names: tuple = ()
    attribute_names: tuple = ()
    ids: tuple | None = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        labs = np.asarray(self.labels)
        if feats.ndim != 2 or labs.ndim != 2:
            raise DatasetError("features and labels must be 2-d")
        if np.isnan(feats).any():
            r, c = np.argwhere(np.isnan(feats))[0]
            raise MissingValueError(f"NaN feature value at row {r}, column {c}")
        if not np.isin(labs, (0, 1)).all():
            raise NonBinaryLabelError("label matrix entries must be 0 or 1")
        if labs.shape[1] != len(self.label_names):
            raise DatasetError(
                f"label matrix has {labs.shape[1]} columns but {len(self.label_names)} label names"
            )
        if feats.shape[0] < labs.shape[0]:
            raise DatasetError("more label rows than feature rows")
        if labs.shape[0] == 0:
            raise EmptyDatasetError("dataset has no labeled instances")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs.astype(np.uint8))
        object.__setattr__(self, "label_names", tuple(self.label_names))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "attribute_names", tuple(self.attribute_names))
        if self.ids is not None:
            object.__setattr__(self, "ids", tuple(self.ids))

    @property
    def num_labeled(self) -> int:
        return self.labels.shape[0]

    @property
    def num_unlabeled(self) -> int:
        return self.features.shape[0] - self.labels.shape[0]

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def num_labels(self) -> int:
        return self.labels.shape[1]


@dataclass(frozen=True)
class FoldPlan:
    """Fold index per labeled instance; regenerable from (num_folds, seed)."""

    num_folds: int
    assignment: np.ndarray
    seed: int

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        object.__setattr__(self, "assignment", a)
        sizes = np.bincount(a, minlength=self.num_folds)
        if (sizes == 0).any():
            raise ValueError("every fold must receive at least one instance")
        if sizes.max() - sizes.min() > 1:
            raise ValueError("fold sizes may differ by at most 1")


@dataclass(frozen=True)
class Split:
    """One train/test partition of the labeled instances.

    Classifiers receive ``test_features`` only; ``test_labels`` exist for
    metric computation after prediction.
    """

    train_features: np.ndarray
    train_labels: np.ndarray
    test_features: np.ndarray
    test_labels: np.ndarray
    train_indices: np.ndarray
    test_indices: np.ndarray


def scale_features(X: np.ndarray) -> np.ndarray:
    """Min-max scale each column to [0, 1]; constant columns become 0."""
    X = np.asarray(X, dtype=np.float64)
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    return np.where(span > 0, (X - lo) / safe, 0.0)


# ---------------------------------------------------------------------------
# loading


def load_dataset(path, format: str, *, labels=None, labels_xml=None) -> Dataset:
    """Load a dataset file.

    For ``mulan-arff`` the label attribute names come from ``labels`` (a
    sequence of names), ``labels_xml`` (path), or a sibling ``<stem>.xml``
    next to the data file, in that priority order.
    """
    path = Path(path)
    if format not in FORMATS:
        raise DatasetError(f"format must be one of {FORMATS}, got {format!r}")
    if not path.exists():
        raise DatasetError(f"no such file: {path}")
    if format == "csv":
        return _load_csv(path)
    if labels is None:
        xml_path = Path(labels_xml) if labels_xml else path.with_suffix(".xml")
        if not xml_path.exists():
            raise MissingLabelListError(
                f"no label list: expected {xml_path} or explicit label names"
            )
        labels = _parse_label_xml(xml_path)
    return _load_arff(path, list(labels))


def _parse_label_xml(path: Path):
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise MissingLabelListError(f"unparseable label XML {path}: {exc}") from exc
    names = [el.attrib["name"] for el in root.iter() if el.tag.endswith("label") and "name" in el.attrib]
    if not names:
        raise MissingLabelListError(f"label XML {path} declares no labels")
    return names


def _arff_split_csv(line: str):
    return next(csv.reader(io.StringIO(line), skipinitialspace=True))


def _read_arff_sections(path: Path):
    attributes = []  # (name, None for numeric | list of nominal values)
    data_lines = []
    in_data = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            if in_data:
                data_lines.append((lineno, line))
                continue
            lowered = line.lower()
            if lowered.startswith("@relation"):
                continue
            if lowered.startswith("@data"):
                in_data = True
                continue
            if lowered.startswith("@attribute"):
                attributes.append(_parse_attribute(line, lineno))
                continue
            raise MalformedHeaderError(f"line {lineno}: unexpected header line {line!r}")
    if not in_data:
        raise MalformedHeaderError("no @data section found")
    if not attributes:
        raise MalformedHeaderError("no @attribute declarations found")
    return attributes, data_lines


def _load_arff(path: Path, label_names) -> Dataset:
    attributes, data_lines = _read_arff_sections(path)
    name_to_idx = {name: i for i, (name, _) in enumerate(attributes)}
    missing = [n for n in label_names if n not in name_to_idx]
    if missing:
        raise MissingLabelListError(f"label attribute(s) not in header: {missing}")
    label_idx = {name_to_idx[n] for n in label_names}

    rows = []
    for lineno, line in data_lines:
        values = _arff_split_csv(line)
        if len(values) != len(attributes):
            raise MalformedHeaderError(
                f"line {lineno}: row has {len(values)} values, header declares {len(attributes)}"
            )
        rows.append((lineno, [v.strip() for v in values]))
    if not rows:
        raise EmptyDatasetError(f"{path} contains no data rows")

    features, feature_names = [], []
    labels = np.zeros((len(rows), len(label_names)), dtype=np.uint8)
    label_pos = {name_to_idx[n]: j for j, n in enumerate(label_names)}
    for col, (name, nominal) in enumerate(attributes):
        column = [row[col] for _, row in rows]
        if col in label_idx:
            labels[:, label_pos[col]] = _binary_column(column, rows, name)
        else:
            encoded, names = _encode_feature(column, rows, name, nominal)
            features.append(encoded)
            feature_names.extend(names)
    matrix = np.column_stack(features) if features else np.empty((len(rows), 0))
    return Dataset(
        features=matrix,
        labels=labels,
        label_names=tuple(label_names),
        feature_names=tuple(feature_names),
        attribute_names=tuple(name for name, _ in attributes if name_to_idx[name] not in label_idx),
    )


def _parse_attribute(line: str, lineno: int):
    body = line.split(None, 1)[1].strip() if len(line.split(None, 1)) > 1 else ""
    if not body:
        raise MalformedHeaderError(f"line {lineno}: @attribute without a name")
    if body.startswith(("'", '"')):
        quote = body[0]
        end = body.find(quote, 1)
        if end < 0:
            raise MalformedHeaderError(f"line {lineno}: unterminated attribute name")
        name, rest = body[1:end], body[end + 1 :].strip()
    else:
        parts = body.split(None, 1)
        if len(parts) != 2:
            raise MalformedHeaderError(f"line {lineno}: @attribute needs a name and a type")
        name, rest = parts[0], parts[1].strip()
    if rest.startswith("{"):
        if not rest.endswith("}"):
            raise MalformedHeaderError(f"line {lineno}: unterminated nominal value list")
        values = [v.strip().strip("'\"") for v in _arff_split_csv(rest[1:-1])]
        if len(values) < 2:
            raise MalformedHeaderError(f"line {lineno}: nominal attribute needs >= 2 values")
        return name, values
    if rest.lower() in ("numeric", "real", "integer"):
        return name, None
    raise UnknownAttributeTypeError(f"line {lineno}: attribute {name!r} has unsupported type {rest!r}")


def _binary_column(column, rows, name) -> np.ndarray:
    out = np.zeros(len(column), dtype=np.uint8)
    for r, v in enumerate(column):
        if v in ("0", "0.0"):
            out[r] = 0
        elif v in ("1", "1.0"):
            out[r] = 1
        elif v == "?":
            raise MissingValueError(f"line {rows[r][0]}: missing value in label column {name!r}")
        else:
            raise NonBinaryLabelError(
                f"line {rows[r][0]}: label column {name!r} has non-binary value {v!r}"
            )
    return out


def _encode_feature(column, rows, name, nominal):
    if nominal is None:
        out = np.empty(len(column))
        for r, v in enumerate(column):
            if v == "?" or v == "":
                raise MissingValueError(f"line {rows[r][0]}: missing value in column {name!r}")
            try:
                out[r] = float(v)
            except ValueError:
                raise MissingValueError(
                    f"line {rows[r][0]}: non-numeric value {v!r} in numeric column {name!r}"
                ) from None
        if np.isnan(out).any():
            r = int(np.flatnonzero(np.isnan(out))[0])
            raise MissingValueError(f"line {rows[r][0]}: NaN value in column {name!r}")
        return out.reshape(-1, 1), [name]
    index = {v: i for i, v in enumerate(nominal)}
    codes = np.empty(len(column), dtype=np.int64)
    for r, v in enumerate(column):
        v = v.strip().strip("'\"")
        if v == "?":
            raise MissingValueError(f"line {rows[r][0]}: missing value in column {name!r}")
        if v not in index:
            raise UnknownAttributeTypeError(
                f"line {rows[r][0]}: value {v!r} not declared for nominal column {name!r}"
            )
        codes[r] = index[v]
    if len(nominal) == 2:
        return codes.astype(np.float64).reshape(-1, 1), [name]
    onehot = np.zeros((len(column), len(nominal)))
    onehot[np.arange(len(column)), codes] = 1.0
    return onehot, [f"{name}={v}" for v in nominal]


def _load_csv(path: Path) -> Dataset:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDatasetError(f"{path} is empty") from None
        rows = [(lineno, row) for lineno, row in enumerate(reader, start=2) if row]
    header = [h.strip() for h in header]
    label_cols = [i for i, h in enumerate(header) if h.startswith("label:")]
    feature_cols = [i for i, h in enumerate(header) if not h.startswith("label:")]
    if not label_cols:
        raise MalformedHeaderError("CSV header declares no 'label:' columns")
    if not rows:
        raise EmptyDatasetError(f"{path} contains no data rows")

    features = np.empty((len(rows), len(feature_cols)))
    labels = np.zeros((len(rows), len(label_cols)), dtype=np.uint8)
    for r, (lineno, row) in enumerate(rows):
        if len(row) != len(header):
            raise MalformedHeaderError(
                f"line {lineno}: row has {len(row)} values, header declares {len(header)}"
            )
        for f, col in enumerate(feature_cols):
            v = row[col].strip()
            if v in ("", "?"):
                raise MissingValueError(f"line {lineno}: missing value in column {header[col]!r}")
            try:
                features[r, f] = float(v)
            except ValueError:
                raise MissingValueError(
                    f"line {lineno}: non-numeric value {v!r} in column {header[col]!r}"
                ) from None
        for l, col in enumerate(label_cols):
            v = row[col].strip()
            if v == "0":
                labels[r, l] = 0
            elif v == "1":
                labels[r, l] = 1
            else:
                raise NonBinaryLabelError(
                    f"line {lineno}: label column {header[col]!r} has non-binary value {v!r}"
                )
    if np.isnan(features).any():
        r, c = np.argwhere(np.isnan(features))[0]
        raise MissingValueError(
            f"line {rows[r][0]}: NaN value in column {header[feature_cols[c]]!r}"
        )
    names = [header[c] for c in feature_cols]
    return Dataset(
        features=features,
        labels=labels,
        label_names=tuple(header[c][len("label:"):] for c in label_cols),
        feature_names=tuple(names),
        attribute_names=tuple(names),
    )


def _load_features_only(path: Path, format: str) -> np.ndarray:
    """Parse a file as bare features (for unlabeled instances).

    CSV columns prefixed ``label:`` are dropped; ARFF attributes are all
    treated as features.  Unlike :func:`load_dataset`, zero data rows
    are legal here and yield an empty matrix.
    """
    if format == "csv":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = [h.strip() for h in next(reader)]
            except StopIteration:
                raise EmptyDatasetError(f"{path} is empty") from None
            feature_cols = [i for i, h in enumerate(header) if not h.startswith("label:")]
            rows = [row for row in reader if row]
        out = np.empty((len(rows), len(feature_cols)))
        for r, row in enumerate(rows):
            for f, col in enumerate(feature_cols):
                v = row[col].strip()
                if v in ("", "?"):
                    raise MissingValueError(f"row {r + 2}: missing value in column {header[col]!r}")
                try:
                    out[r, f] = float(v)
                except ValueError:
                    raise MissingValueError(
                        f"row {r + 2}: non-numeric value {v!r} in column {header[col]!r}"
                    ) from None
        return out
    # mulan-arff: reuse the full parser with a synthetic always-0 label row guard
    attributes, data_lines = _read_arff_sections(path)
    if not data_lines:
        return np.empty((0, sum(len(n) if n and len(n) > 2 else 1 for _, n in attributes)))
    rows = []
    for lineno, line in data_lines:
        values = _arff_split_csv(line)
        if len(values) != len(attributes):
            raise MalformedHeaderError(
                f"line {lineno}: row has {len(values)} values, header declares {len(attributes)}"
            )
        rows.append((lineno, [v.strip() for v in values]))
    blocks = []
    for col, (name, nominal) in enumerate(attributes):
        encoded, _ = _encode_feature([row[col] for _, row in rows], rows, name, nominal)
        blocks.append(encoded)
    return np.column_stack(blocks)


def save_csv(dataset: Dataset, path) -> None:
    """Write features + labels as CSV; float formatting round-trips bit-exactly."""
    if dataset.num_unlabeled:
        raise DatasetError("CSV export covers fully labeled datasets only")
    names = dataset.feature_names or tuple(f"f{i}" for i in range(dataset.num_features))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join([*names, *(f"label:{n}" for n in dataset.label_names)]) + "\n")
        for r in range(dataset.features.shape[0]):
            feats = ",".join(repr(float(v)) for v in dataset.features[r])
            labs = ",".join(str(int(v)) for v in dataset.labels[r])
            fh.write(feats + ("," if feats and labs else "") + labs + "\n")


# ---------------------------------------------------------------------------
# folds


def make_folds(dataset: Dataset, num_folds: int, seed: int) -> FoldPlan:
    """Greedy iterative stratification, rarest label first, seeded.

    Fold capacities are fixed up front (sizes differ by at most one).
    Labels are processed from rarest to most common; each positive
    instance goes to the non-full fold with the greatest remaining
    demand for that label, ties broken by remaining capacity and then
    by the lower fold index.  Fold eligibility is tiered so no label
    ever exceeds its balanced share by more than one: folds where every
    label carried by the instance stays within ceil(positives/folds)
    are preferred, then folds within the +1 slack, then any non-full
    fold.  Placing an instance decrements the demand of every label it
    carries.  Label-free instances fill remaining capacity at the end.
    Deterministic for a fixed seed.
    """
    n = dataset.num_labeled
    if num_folds < 2:
        raise ValueError("num_folds must be >= 2")
    if num_folds > n:
        raise ValueError(f"num_folds={num_folds} exceeds the {n} labeled instances")
    assignment = _stratified_assignment(dataset.labels, num_folds, seed)
    return FoldPlan(num_folds=num_folds, assignment=assignment, seed=seed)


def _stratified_assignment(y: np.ndarray, num_folds: int, seed: int) -> np.ndarray:
    n, num_labels = y.shape
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)

    caps = np.full(num_folds, n // num_folds, dtype=np.int64)
    caps[: n % num_folds] += 1
    counts = np.zeros(num_folds, dtype=np.int64)
    totals = y.sum(axis=0, dtype=np.int64)
    share = -(-totals // num_folds)  # ceil(total / num_folds) per label
    desire = np.repeat(totals.astype(np.float64)[:, None] / num_folds, num_folds, axis=1)
    lab_counts = np.zeros((num_labels, num_folds), dtype=np.int64)
    assignment = np.full(n, -1, dtype=np.int64)

    def place(i: int, fold: int):
        assignment[i] = fold
        counts[fold] += 1
        carried = y[i] == 1
        desire[carried, fold] -= 1.0
        lab_counts[carried, fold] += 1

    def eligible(i: int) -> np.ndarray:
        open_folds = counts < caps
        carried = np.flatnonzero(y[i] == 1)
        within_share = open_folds & (lab_counts[carried] < share[carried, None]).all(axis=0)
        if within_share.any():
            return np.flatnonzero(within_share)
        within_slack = open_folds & (lab_counts[carried] < share[carried, None] + 1).all(axis=0)
        if within_slack.any():
            return np.flatnonzero(within_slack)
        return np.flatnonzero(open_folds)

    while True:
        unassigned = assignment == -1
        remaining = (y[unassigned] == 1).sum(axis=0)
        open_labels = np.flatnonzero(remaining > 0)
        if open_labels.size == 0:
            break
        target = open_labels[np.argmin(remaining[open_labels])]
        for i in order:
            if assignment[i] != -1 or y[i, target] != 1:
                continue
            feasible = eligible(i)
            keys = desire[target, feasible]
            best = feasible[keys == keys.max()]
            if best.size > 1:
                room = (caps - counts)[best]
                best = best[room == room.max()]
            place(i, int(best[0]))
    for i in order:
        if assignment[i] == -1:
            room = caps - counts
            place(i, int(np.flatnonzero(room == room.max())[0]))
    return _repair_label_bounds(y, assignment, num_folds, share)


def _repair_label_bounds(y, assignment, num_folds, share):
    """Swap instances between folds until no label exceeds its share + 1.

    The greedy pass can overflow a label when fold capacity runs out in
    the folds that still need it.  Swapping a positive out of the
    overfull fold for a negative keeps fold sizes intact; each applied
    swap strictly decreases total overflow, so this terminates.  Swaps
    are searched in deterministic order.
    """
    bound = share + 1
    lab_counts = np.zeros((y.shape[1], num_folds), dtype=np.int64)
    for l in range(y.shape[1]):
        lab_counts[l] = np.bincount(assignment[y[:, l] == 1], minlength=num_folds)

    def overflow():
        return int(np.maximum(lab_counts - bound[:, None], 0).sum())

    current = overflow()
    while current > 0:
        lab, fold = map(int, np.argwhere(lab_counts > bound[:, None])[0])
        movers = np.flatnonzero((assignment == fold) & (y[:, lab] == 1))
        applied = False
        for i in movers:
            for other in range(num_folds):
                if other == fold or lab_counts[lab, other] >= bound[lab]:
                    continue
                receivers = np.flatnonzero((assignment == other) & (y[:, lab] == 0))
                for j in receivers:
                    delta = (
                        np.maximum(lab_counts[:, fold] - y[i] + y[j] - bound, 0).sum()
                        + np.maximum(lab_counts[:, other] + y[i] - y[j] - bound, 0).sum()
                        - np.maximum(lab_counts[:, fold] - bound, 0).sum()
                        - np.maximum(lab_counts[:, other] - bound, 0).sum()
                    )
                    if delta < 0:
                        assignment[i], assignment[j] = other, fold
                        lab_counts[:, fold] += y[j].astype(np.int64) - y[i]
                        lab_counts[:, other] += y[i].astype(np.int64) - y[j]
                        applied = True
                        break
                if applied:
                    break
            if applied:
                break
        if not applied:
            break  # no improving swap; leave the residual imbalance
        current = overflow()
    return assignment


def split(dataset: Dataset, plan: FoldPlan, test_fold: int) -> Split:
    """Train/test views of the labeled instances for one fold."""
    if not 0 <= test_fold < plan.num_folds:
        raise ValueError(f"test_fold={test_fold} out of range [0, {plan.num_folds})")
    mask = plan.assignment == test_fold
    test_idx = np.flatnonzero(mask)
    train_idx = np.flatnonzero(~mask)
    labeled = dataset.features[: dataset.num_labeled]
    return Split(
        train_features=labeled[train_idx],
        train_labels=dataset.labels[train_idx],
        test_features=labeled[test_idx],
        test_labels=dataset.labels[test_idx],
        train_indices=train_idx,
        test_indices=test_idx,
    )
