"""Per-feature statistics and z-score / min-max normalization."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dataset import Dataset

METHODS = ("none", "zscore", "minmax")
AXES = ("feature", "pattern")


@dataclass(frozen=True, eq=False)
class FeatureStats:
    """Column statistics of a pattern matrix.

    ``std`` is the population form (divided by the pattern count).
    ``min_gap`` is the distance from the smallest value to the next larger
    distinct value and ``max_gap`` the full value range; both are 0 for a
    constant feature.
    """

    mean: np.ndarray
    std: np.ndarray
    min: np.ndarray
    max: np.ndarray
    min_gap: np.ndarray
    max_gap: np.ndarray

    @property
    def n(self) -> int:
        return self.mean.shape[0]

    def check(self, ds: Dataset):
        if ds.n != self.n:
            raise ValueError(f"stats fitted on {self.n} features, dataset has {ds.n}")


def feature_stats(X) -> FeatureStats:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("need a non-empty 2-D pattern matrix")
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    min_gap = np.zeros(X.shape[1])
    for d in range(X.shape[1]):
        above = X[:, d][X[:, d] > lo[d]]
        if above.size:
            min_gap[d] = above.min() - lo[d]
    # rounding can leave a tiny spread on a constant column; pin it to zero
    std = np.where(hi > lo, X.std(axis=0), 0.0)
    return FeatureStats(
        mean=X.mean(axis=0),
        std=std,
        min=lo,
        max=hi,
        min_gap=min_gap,
        max_gap=hi - lo,
    )


def fit_stats(ds: Dataset) -> FeatureStats:
    return feature_stats(ds.features)


def zscore(ds: Dataset, stats: FeatureStats) -> Dataset:
    """Standardize each feature column; constant columns become 0."""
    stats.check(ds)
    X = ds.features - stats.mean
    scale = np.where(stats.std > 0, stats.std, 1.0)
    Z = np.where(stats.std > 0, X / scale, 0.0)
    return ds.with_features(Z)


def minmax(ds: Dataset, stats: FeatureStats, new_min=0.0, new_max=1.0) -> Dataset:
    """Map each feature column linearly onto ``[new_min, new_max]``.

    Constant columns map to ``new_min``.
    """
    if not new_min < new_max:
        raise ValueError(f"new_min ({new_min}) must be below new_max ({new_max})")
    stats.check(ds)
    span = stats.max - stats.min
    safe = np.where(span > 0, span, 1.0)
    V = (new_max - new_min) * (ds.features - stats.min) / safe + new_min
    V = np.where(span > 0, V, new_min)
    # pin the extremes so endpoints are hit exactly despite rounding
    V = np.where(ds.features == stats.min, new_min, V)
    V = np.where((ds.features == stats.max) & (span > 0), new_max, V)
    return ds.with_features(V)


def zscore_patterns(ds: Dataset) -> Dataset:
    """Standardize each pattern across its own features.

    Rows with zero spread become all zeros.
    """
    X = ds.features
    mu = X.mean(axis=1, keepdims=True)
    flat = X.max(axis=1, keepdims=True) == X.min(axis=1, keepdims=True)
    sd = np.where(flat, 0.0, X.std(axis=1, keepdims=True))
    Z = np.where(sd > 0, (X - mu) / np.where(sd > 0, sd, 1.0), 0.0)
    return ds.with_features(Z)


def minmax_patterns(ds: Dataset, new_min=0.0, new_max=1.0) -> Dataset:
    if not new_min < new_max:
        raise ValueError(f"new_min ({new_min}) must be below new_max ({new_max})")
    X = ds.features
    lo = X.min(axis=1, keepdims=True)
    span = X.max(axis=1, keepdims=True) - lo
    V = (new_max - new_min) * (X - lo) / np.where(span > 0, span, 1.0) + new_min
    return ds.with_features(np.where(span > 0, V, new_min))


@dataclass(frozen=True, eq=False)
class NormalizationSpec:
    """Record of a normalization that was applied.

    ``fitted`` holds the column statistics for the feature axis; it is None for
    ``method='none'`` and for the per-pattern axis.
    """

    method: str = "none"
    new_min: float = 0.0
    new_max: float = 1.0
    axis: str = "feature"
    fitted: Optional[FeatureStats] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown normalization {self.method!r}; choose from {METHODS}")
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; choose from {AXES}")
        if self.method == "minmax" and not self.new_min < self.new_max:
            raise ValueError("new_min must be below new_max")

    def inverse(self, ds: Dataset) -> Dataset:
        """Undo a feature-axis normalization (constant columns map back to their value)."""
        if self.method == "none":
            return ds
        if self.axis != "feature":
            raise ValueError("per-pattern normalization keeps no statistics and cannot be inverted")
        s = self.fitted
        if self.method == "zscore":
            return ds.with_features(ds.features * s.std + s.mean)
        span = s.max - s.min
        X = (ds.features - self.new_min) / (self.new_max - self.new_min) * span + s.min
        return ds.with_features(X)


def normalize(ds: Dataset, method="none", *, axis="feature", new_min=0.0, new_max=1.0):
    """Apply a normalization and return ``(normalized, spec)``.

    Statistics are always fitted on ``ds`` itself.
    """
    spec = NormalizationSpec(method, new_min, new_max, axis)
    if method == "none":
        return ds, spec
    if axis == "pattern":
        out = zscore_patterns(ds) if method == "zscore" else minmax_patterns(ds, new_min, new_max)
        return out, spec
    stats = fit_stats(ds)
    spec = NormalizationSpec(method, new_min, new_max, axis, stats)
    if method == "zscore":
        return zscore(ds, stats), spec
    return minmax(ds, stats, new_min, new_max), spec
