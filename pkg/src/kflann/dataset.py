"""Numeric datasets: CSV ingestion, summaries and the dataset manifest."""
from __future__ import annotations

import configparser
import csv
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np


class DatasetError(ValueError):
    """Raised for malformed or inconsistent dataset files."""


class Pattern(NamedTuple):
    features: np.ndarray
    label: Optional[str] = None


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ordered, immutable collection of feature vectors.

    Parameters
    ----------
    features : array_like, shape (n_patterns, n_features)
        Pattern matrix. Row order is significant and preserved.
    labels : sequence of str, optional
        One class label per pattern. Labels are opaque strings.
    name : str
        Identifier used in reports.
    expected_clusters : int, optional
        Number of clusters known from domain knowledge.
    feature_names : sequence of str, optional
    """

    features: np.ndarray
    labels: Optional[tuple] = None
    name: str = "dataset"
    expected_clusters: Optional[int] = None
    feature_names: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, copy=True)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
            raise DatasetError(f"{self.name}: need a non-empty 2-D pattern matrix, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            r, c = np.argwhere(~np.isfinite(X))[0]
            raise DatasetError(f"{self.name}: non-finite value at pattern {r}, feature {c}")
        X.setflags(write=False)
        object.__setattr__(self, "features", X)
        if self.labels is not None:
            labels = tuple(str(v) for v in self.labels)
            if len(labels) != X.shape[0]:
                raise DatasetError(
                    f"{self.name}: {len(labels)} labels for {X.shape[0]} patterns")
            object.__setattr__(self, "labels", labels)
        if self.expected_clusters is not None and self.expected_clusters < 1:
            raise DatasetError(f"{self.name}: expected_clusters must be >= 1")
        if self.feature_names is not None:
            names = tuple(self.feature_names)
            if len(names) != X.shape[1]:
                raise DatasetError(f"{self.name}: {len(names)} feature names for {X.shape[1]} features")
            object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        """Number of features per pattern."""
        return self.features.shape[1]

    @property
    def labeled(self) -> bool:
        return self.labels is not None

    def __len__(self):
        return self.features.shape[0]

    def __getitem__(self, i) -> Pattern:
        label = None if self.labels is None else self.labels[i]
        return Pattern(self.features[i], label)

    def __iter__(self) -> Iterator[Pattern]:
        for i in range(len(self)):
            yield self[i]

    def with_features(self, features, name=None) -> "Dataset":
        """Same labels and metadata, new feature matrix (e.g. after normalization)."""
        return Dataset(features, self.labels, name or self.name,
                       self.expected_clusters, self.feature_names)

    def reorder(self, order) -> "Dataset":
        """Copy with patterns presented in ``order``; the source is untouched."""
        order = np.asarray(order, dtype=np.intp)
        if sorted(order.tolist()) != list(range(len(self))):
            raise DatasetError("order must be a permutation of the pattern indices")
        labels = None if self.labels is None else [self.labels[i] for i in order]
        return Dataset(self.features[order], labels, self.name,
                       self.expected_clusters, self.feature_names)


def _parse_float(cell):
    try:
        v = float(cell)
    except ValueError:
        return None
    return v


def load_csv(path, label_column=None, *, labeled=False, name=None,
             expected_clusters=None) -> Dataset:
    """Read a comma-separated numeric table.

    A label column is taken when ``label_column`` is given, or when ``labeled``
    is set (the last column is then the label). A first row whose feature cells
    all fail to parse as numbers is treated as a header and skipped.

    Errors name the 1-based file row and column of the offending cell.
    """
    path = os.fspath(path)
    if name is None:
        name = os.path.splitext(os.path.basename(path))[0]
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [(i + 1, r) for i, r in enumerate(csv.reader(fh)) if any(c.strip() for c in r)]
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DatasetError(f"{path}: empty file")

    width = len(rows[0][1])
    for lineno, r in rows:
        if len(r) != width:
            raise DatasetError(f"{path}: row {lineno} has {len(r)} columns, expected {width}")

    if label_column is None and labeled:
        label_column = width - 1
    if label_column is not None:
        if label_column < 0:
            label_column += width
        if not 0 <= label_column < width:
            raise DatasetError(f"{path}: label column {label_column} out of range for {width} columns")
    feat_cols = [c for c in range(width) if c != label_column]
    if not feat_cols:
        raise DatasetError(f"{path}: no feature columns")

    header = None
    first = rows[0][1]
    if all(_parse_float(first[c]) is None for c in feat_cols):
        header = [first[c].strip() for c in feat_cols]
        rows = rows[1:]
        if not rows:
            raise DatasetError(f"{path}: header row but no data")

    X = np.empty((len(rows), len(feat_cols)))
    labels = [] if label_column is not None else None
    for i, (lineno, r) in enumerate(rows):
        for j, c in enumerate(feat_cols):
            v = _parse_float(r[c])
            if v is None:
                raise DatasetError(
                    f"{path}: cannot parse {r[c]!r} as a number at row {lineno}, column {c + 1}")
            if not math.isfinite(v):
                raise DatasetError(f"{path}: non-finite value at row {lineno}, column {c + 1}")
            X[i, j] = v
        if labels is not None:
            labels.append(r[label_column].strip())
    return Dataset(X, labels, name, expected_clusters, header)


def write_csv(ds: Dataset, path, header=True):
    """Write ``ds`` so that :func:`load_csv` restores it bit-exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            names = list(ds.feature_names or [f"x{i + 1}" for i in range(ds.n)])
            w.writerow(names + (["class"] if ds.labeled else []))
        for i in range(len(ds)):
            row = [repr(float(v)) for v in ds.features[i]]
            if ds.labeled:
                row.append(ds.labels[i])
            w.writerow(row)


@dataclass(frozen=True)
class DatasetSummary:
    name: str
    n_patterns: int
    n_features: int
    class_counts: Optional[dict] = None

    def to_dict(self):
        d = {"name": self.name, "patterns": self.n_patterns, "features": self.n_features}
        if self.class_counts is not None:
            d["classes"] = dict(self.class_counts)
        return d


def class_counts(labels: Sequence[str]) -> dict:
    """Label histogram in order of first appearance."""
    return dict(Counter(labels))


def describe(ds: Dataset) -> DatasetSummary:
    counts = class_counts(ds.labels) if ds.labeled else None
    return DatasetSummary(ds.name, len(ds), ds.n, counts)


@dataclass(frozen=True)
class DatasetManifestEntry:
    """One dataset listed in a manifest file."""

    name: str
    path: str
    n: int
    expected_clusters: int
    class_counts: Optional[dict] = None
    labeled: bool = True

    def __post_init__(self):
        if self.expected_clusters < 1:
            raise DatasetError(f"manifest entry {self.name}: expected_clusters must be >= 1")

    def exists(self) -> bool:
        return os.path.isfile(self.path)

    def load(self) -> Dataset:
        ds = load_csv(self.path, labeled=self.labeled, name=self.name,
                      expected_clusters=self.expected_clusters)
        if ds.n != self.n:
            raise DatasetError(f"{self.name}: manifest says n={self.n}, file has {ds.n} features")
        if self.class_counts is not None:
            if sum(self.class_counts.values()) != len(ds):
                raise DatasetError(
                    f"{self.name}: manifest class counts sum to {sum(self.class_counts.values())}, "
                    f"file has {len(ds)} patterns")
            if ds.labeled and class_counts(ds.labels) != self.class_counts:
                raise DatasetError(f"{self.name}: class histogram does not match manifest")
        return ds


def _parse_counts(text):
    counts = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        label, _, count = item.rpartition(":")
        counts[label.strip()] = int(count)
    return counts


def load_manifest(path) -> dict:
    """Parse an INI manifest into ``{name: DatasetManifestEntry}``.

    Each section names a dataset::

        [iris]
        path = iris.csv
        n = 4
        expected_clusters = 3
        class_counts = 1:50, 2:50, 3:50

    Relative paths resolve against the manifest's directory.
    """
    path = os.fspath(path)
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        raise DatasetError(f"cannot read manifest {path}")
    base = os.path.dirname(os.path.abspath(path))
    entries = {}
    for name in parser.sections():
        sec = parser[name]
        try:
            counts = _parse_counts(sec["class_counts"]) if "class_counts" in sec else None
            entries[name] = DatasetManifestEntry(
                name=name,
                path=os.path.join(base, sec["path"]),
                n=sec.getint("n"),
                expected_clusters=sec.getint("expected_clusters"),
                class_counts=counts,
                labeled=sec.getboolean("labeled", fallback=True),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise DatasetError(f"manifest {path}, section [{name}]: {exc}") from exc
    return entries
