"""Error rates against class labels and vigilance sweeps."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dataset import Dataset
from .network import KflannParams, fit, parse_vigilance
from .tolerance import ToleranceVector


@dataclass(frozen=True, eq=False)
class EvalReport:
    """Majority-label scoring of a clustering.

    ``confusion[j, c]`` counts members of cluster j carrying ``classes[c]``.
    """

    cluster_count: int
    error_rate_percent: float
    mapping: dict
    confusion: np.ndarray
    classes: tuple
    misclassified: int
    total: int

    def to_dict(self):
        return {
            "cluster_count": self.cluster_count,
            "error_rate_percent": self.error_rate_percent,
            "misclassified": self.misclassified,
            "total": self.total,
            "mapping": {str(k): v for k, v in self.mapping.items()},
            "classes": list(self.classes),
            "confusion": self.confusion.tolist(),
        }


def error_rate(model, ds: Dataset) -> EvalReport:
    """Map each cluster to its most frequent label and count the rest as errors.

    ``model`` may be a fitted model or a plain assignment array. Label ties go
    to the tied class whose earliest member in the cluster has the lowest
    pattern index.
    """
    if not ds.labeled:
        raise ValueError(f"{ds.name}: error rate needs a labeled dataset")
    assign = np.asarray(getattr(model, "assignments", model), dtype=np.int64)
    if assign.shape != (len(ds),):
        raise ValueError(f"{assign.shape[0]} assignments for {len(ds)} patterns")
    classes = tuple(dict.fromkeys(ds.labels))
    cidx = {c: i for i, c in enumerate(classes)}
    y = np.array([cidx[v] for v in ds.labels])
    k = int(assign.max()) + 1
    confusion = np.zeros((k, len(classes)), dtype=np.int64)
    np.add.at(confusion, (assign, y), 1)

    mapping, wrong = {}, 0
    for j in range(k):
        row = confusion[j]
        if row.sum() == 0:
            continue
        tied = np.flatnonzero(row == row.max())
        if tied.size > 1:
            members = np.flatnonzero(assign == j)
            first = {c: members[y[members] == c][0] for c in tied}
            top = min(tied, key=first.get)
        else:
            top = tied[0]
        mapping[j] = classes[top]
        wrong += int(row.sum() - row[top])
    n_clusters = len(mapping)
    return EvalReport(n_clusters, 100.0 * wrong / len(ds), mapping, confusion,
                      classes, wrong, len(ds))


@dataclass(frozen=True)
class SweepPoint:
    vigilance: float
    clusters: int
    error_rate_percent: Optional[float]
    epochs: int
    converged: bool


@dataclass(frozen=True)
class SweepResult:
    points: tuple

    @property
    def vigilance(self):
        return [p.vigilance for p in self.points]

    @property
    def clusters(self):
        return [p.clusters for p in self.points]

    @property
    def errors(self):
        return [p.error_rate_percent for p in self.points]


def vigilance_sweep(ds: Dataset, delta: ToleranceVector, rho_grid: Sequence,
                    max_epochs: int = 100) -> SweepResult:
    """Fit once per vigilance value; the grid must be strictly increasing."""
    grid = [parse_vigilance(r) for r in rho_grid]
    if not grid:
        raise ValueError("vigilance grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("vigilance grid must be strictly increasing")
    pts = []
    for rho in grid:
        m = fit(ds, KflannParams(rho, delta, max_epochs))
        err = error_rate(m, ds).error_rate_percent if ds.labeled else None
        pts.append(SweepPoint(rho, m.n_clusters, err, m.epochs_run, m.converged))
    return SweepResult(tuple(pts))


def rho_grid(start: float, stop: float, step: float):
    """Inclusive grid ``start, start+step, ..., stop`` without float drift."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(round((stop - start) / step))
    return [round(start + i * step, 12) for i in range(count + 1)]
