"""Per-feature tolerance vectors: standard deviation, max-min midpoint, or manual."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .preprocess import FeatureStats

TOLERANCE_METHODS = ("stddev", "maxmin", "manual")


@dataclass(frozen=True, eq=False)
class ToleranceVector:
    """Allowed deviation per feature.

    Attributes
    ----------
    delta : ndarray of float, shape (n,)
        Finite, non-negative.
    method : {'stddev', 'maxmin', 'manual', 'tuned'}
    """

    delta: np.ndarray
    method: str = "manual"

    def __post_init__(self):
        d = np.array(self.delta, dtype=np.float64, copy=True).reshape(-1)
        if d.size == 0:
            raise ValueError("tolerance vector is empty")
        if not np.all(np.isfinite(d)):
            raise ValueError("tolerance values must be finite")
        if np.any(d < 0):
            raise ValueError(f"tolerance values must be >= 0, got {d[d < 0][0]}")
        if self.method not in TOLERANCE_METHODS + ("tuned",):
            raise ValueError(f"unknown tolerance method {self.method!r}")
        d.setflags(write=False)
        object.__setattr__(self, "delta", d)

    @property
    def n(self) -> int:
        return self.delta.shape[0]

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.delta, dtype=dtype)


def tolerance_stddev(stats: FeatureStats) -> ToleranceVector:
    return ToleranceVector(stats.std, "stddev")


def tolerance_maxmin(stats: FeatureStats) -> ToleranceVector:
    """Midpoint of the smallest distinct gap and the full range of each feature."""
    return ToleranceVector((stats.max_gap + stats.min_gap) / 2.0, "maxmin")


def tolerance_manual(values, n=None) -> ToleranceVector:
    """Use ``values`` verbatim; ``n`` checks the length against a dataset."""
    d = np.asarray(values, dtype=np.float64).reshape(-1)
    if n is not None and d.size != n:
        raise ValueError(f"expected {n} tolerance values, got {d.size}")
    return ToleranceVector(d, "manual")


def make_tolerance(method, stats: FeatureStats, values=None) -> ToleranceVector:
    if method == "stddev":
        return tolerance_stddev(stats)
    if method == "maxmin":
        return tolerance_maxmin(stats)
    if method == "manual":
        if values is None:
            raise ValueError("manual tolerance needs explicit values")
        return tolerance_manual(values, stats.n)
    raise ValueError(f"unknown tolerance method {method!r}; choose from {TOLERANCE_METHODS}")
