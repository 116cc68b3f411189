"""Seeded synthetic benchmark data: truncated Gaussian blobs on a lattice."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
from scipy.spatial.distance import cdist, pdist
from scipy.stats import truncnorm

from .dataset import Dataset


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a blob dataset.

    Class 0 sits at the origin. Features are split into ``len(counts) - 1``
    contiguous blocks and class c >= 1 is shifted by ``offset`` along every
    feature of block c-1. Each coordinate is Gaussian noise with scale
    ``sigma`` truncated at ``+-trunc * sigma``. Patterns are shuffled.
    """

    id: int
    n_features: int
    counts: Tuple[int, ...]
    offset: float
    separation: Optional[str] = None
    seed: int = 0
    sigma: float = 1.0
    trunc: float = 2.5

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.counts) < 1 or any(c < 1 for c in self.counts):
            raise ValueError(f"class counts must be positive, got {self.counts}")
        if self.n_features < 1:
            raise ValueError("n_features must be >= 1")
        if len(self.counts) - 1 > self.n_features:
            raise ValueError("need at least one feature per non-origin class")
        if self.sigma <= 0 or self.trunc <= 0:
            raise ValueError("sigma and trunc must be positive")

    @property
    def name(self) -> str:
        return f"synthetic{self.id}"

    @property
    def n_classes(self) -> int:
        return len(self.counts)

    def centers(self) -> np.ndarray:
        C = np.zeros((self.n_classes, self.n_features))
        if self.n_classes > 1:
            blocks = np.array_split(np.arange(self.n_features), self.n_classes - 1)
            for c, blk in enumerate(blocks, start=1):
                C[c, blk] = self.offset
        return C


PRESETS = {
    1: SynthSpec(1, 2, (500, 500), 20.0, "well"),
    2: SynthSpec(2, 2, (500, 500), 3.0, "half"),
    3: SynthSpec(3, 2, (500, 500), 1.0, "none"),
    4: SynthSpec(4, 8, (250, 150, 100), 20.0),
    5: SynthSpec(5, 8, (150, 150, 100), 20.0),
    6: SynthSpec(6, 8, (100, 150, 100), 0.5),
}


def preset(i: int, seed: int = 0) -> SynthSpec:
    if i not in PRESETS:
        raise ValueError(f"no synthetic preset {i}; choose from {sorted(PRESETS)}")
    return replace(PRESETS[i], seed=seed)


def generate(spec: SynthSpec) -> Dataset:
    rng = np.random.default_rng(spec.seed)
    X, y = [], []
    for c, (mu, m) in enumerate(zip(spec.centers(), spec.counts)):
        z = truncnorm.rvs(-spec.trunc, spec.trunc, size=(m, spec.n_features), random_state=rng)
        X.append(mu + spec.sigma * z)
        y += [str(c + 1)] * m
    X = np.vstack(X)
    y = np.array(y)
    perm = rng.permutation(len(X))
    return Dataset(X[perm], y[perm].tolist(), spec.name, spec.n_classes)


def separation_margin(ds: Dataset) -> float:
    """Smallest between-class distance minus the largest within-class distance.

    Positive means every class is certifiably separable from the others.
    """
    y = np.array(ds.labels)
    labels = list(dict.fromkeys(ds.labels))
    groups = [ds.features[y == c] for c in labels]
    intra = max((pdist(g).max() if len(g) > 1 else 0.0) for g in groups)
    inter = min(cdist(a, b).min() for i, a in enumerate(groups) for b in groups[i + 1:])
    return float(inter - intra)
