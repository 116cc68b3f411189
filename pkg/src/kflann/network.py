"""The KFLANN network: vigilance matching, winner selection, centroid-stable
training epochs and tolerance tuning."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from . import _kernels
from .dataset import Dataset
from .preprocess import FeatureStats, fit_stats
from .tolerance import ToleranceVector

EPOCH_MODES = ("seeded", "rebuild")
CENTROID_TOL = 1e-12


def parse_vigilance(value) -> float:
    """Accept a number or a ratio string such as ``'18/34'``."""
    if isinstance(value, str):
        try:
            v = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse vigilance {value!r}") from exc
    else:
        v = float(value)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"vigilance must lie in [0, 1], got {v}")
    return v


def snap_vigilance(rho: float, n: int, tol: float = 5e-5) -> float:
    """Replace a rounded decimal by the feature ratio ``k/n`` it stands for.

    Published vigilance values are ratios printed to four decimals; taken
    literally, 0.6667 would demand 3 of 3 features instead of 2 of 3.
    Values farther than ``tol`` from every ``k/n`` are returned unchanged.
    """
    k = round(rho * n)
    if abs(rho - k / n) <= tol:
        return k / n
    return rho


def vigilance_from_counts(f_match: int, f_total: int) -> float:
    """Fraction of features that must match, ``f_match / f_total``."""
    if f_total < 1 or not 0 <= f_match <= f_total:
        raise ValueError(f"need 0 <= f_match <= f_total and f_total >= 1, got {f_match}/{f_total}")
    return f_match / f_total


@dataclass(frozen=True)
class KflannParams:
    """Vigilance, tolerance and the epoch budget.

    ``epoch_mode`` picks how an unstable epoch restarts. ``'seeded'`` re-founds
    node j from the member nearest its centroid before the remaining patterns
    are presented; ``'rebuild'`` only moves those exemplars to the front and
    starts from an empty network.
    """

    vigilance: float
    tolerance: ToleranceVector
    max_epochs: int = 100
    epoch_mode: str = "seeded"

    def __post_init__(self):
        object.__setattr__(self, "vigilance", parse_vigilance(self.vigilance))
        if not isinstance(self.tolerance, ToleranceVector):
            object.__setattr__(self, "tolerance", ToleranceVector(self.tolerance))
        if int(self.max_epochs) < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.epoch_mode not in EPOCH_MODES:
            raise ValueError(f"unknown epoch_mode {self.epoch_mode!r}")

    @property
    def delta(self) -> np.ndarray:
        return self.tolerance.delta

    def replace(self, **kw) -> "KflannParams":
        d = dict(vigilance=self.vigilance, tolerance=self.tolerance,
                 max_epochs=self.max_epochs, epoch_mode=self.epoch_mode)
        d.update(kw)
        return KflannParams(**d)


@dataclass(frozen=True, eq=False)
class OutputNode:
    weights: np.ndarray
    members: tuple = ()
    founder: Optional[int] = None


# ---------------------------------------------------------------- matching

def _as_vec(v):
    return np.asarray(getattr(v, "features", v), dtype=np.float64)


def match_score(node, pattern, delta) -> float:
    """Fraction of features where the pattern lies within tolerance of the node.

    Feature i matches when ``delta_i**2 - (w_i - x_i)**2 >= 0``.
    """
    w = _as_vec(getattr(node, "weights", node))
    x = _as_vec(pattern)
    d = np.asarray(delta, dtype=np.float64)
    if not (w.shape == x.shape == d.shape):
        raise ValueError(f"dimension mismatch: node {w.shape}, pattern {x.shape}, tolerance {d.shape}")
    diff = w - x
    return np.count_nonzero(d * d - diff * diff >= 0.0) / x.shape[0]


def find_matches(nodes: Sequence, pattern, params: KflannParams) -> List[int]:
    return [j for j, node in enumerate(nodes)
            if match_score(node, pattern, params.delta) >= params.vigilance]


def winner(matched: Sequence[int], pattern, nodes: Sequence) -> int:
    """Matched node with the smallest squared distance; ties go to the lowest index."""
    if len(matched) == 0:
        raise ValueError("winner() needs at least one matched node")
    x = _as_vec(pattern)
    best, bd = None, np.inf
    for j in sorted(matched):
        w = _as_vec(getattr(nodes[j], "weights", nodes[j]))
        diff = w - x
        d = float(np.sum(diff * diff))
        if best is None or d < bd:
            best, bd = j, d
    return best


# ---------------------------------------------------------------- training

@dataclass(frozen=True, eq=False)
class KflannModel:
    """Result of :func:`fit`.

    Attributes
    ----------
    nodes : tuple of OutputNode
        Final output layer; ``weights`` are the founding exemplars.
    assignments : ndarray of int
        Node index per pattern, in the dataset's original indexing.
    epochs_run : int
    converged : bool
        True when the last two epochs produced the same centroid set.
    centroid_history : list of ndarray
        Per-epoch centroid matrices.
    cluster_history : list of int
    order : ndarray
        Presentation order of the final epoch.
    """

    nodes: tuple
    assignments: np.ndarray
    epochs_run: int
    converged: bool
    centroid_history: list = field(repr=False)
    cluster_history: list
    order: np.ndarray = field(repr=False)
    params: Optional[KflannParams] = field(default=None, repr=False)

    @property
    def n_clusters(self) -> int:
        return len(self.nodes)

    @property
    def centroids(self) -> np.ndarray:
        return self.centroid_history[-1]

    @property
    def weights(self) -> np.ndarray:
        return np.array([nd.weights for nd in self.nodes])


def _centroid_key(C):
    return C[np.lexsort(C.T[::-1])]


def same_centroids(A, B, tol=CENTROID_TOL) -> bool:
    """Multiset equality of two centroid matrices, coordinate-wise within ``tol``."""
    if A.shape != B.shape:
        return False
    return bool(np.all(np.abs(_centroid_key(A) - _centroid_key(B)) <= tol))


def _restart_order(X, order, assign, C):
    front = _kernels.nearest_members(X, assign, C)
    rest = order[~np.isin(order, front)]
    return np.concatenate([front, rest]).astype(np.int64), len(front)


def _check(ds: Dataset, params: KflannParams):
    if params.tolerance.n != ds.n:
        raise ValueError(f"tolerance has {params.tolerance.n} entries, dataset has {ds.n} features")


def _initial_order(ds, order):
    if order is None:
        return np.arange(len(ds), dtype=np.int64)
    order = np.asarray(order, dtype=np.int64)
    if sorted(order.tolist()) != list(range(len(ds))):
        raise ValueError("order must be a permutation of the pattern indices")
    return order.copy()


def fit(ds: Dataset, params: KflannParams, order=None) -> KflannModel:
    """Train until the centroid set is stable between consecutive epochs.

    Each epoch presents the patterns in the working order: a pattern with no
    node passing the vigilance test founds a node (weights copied from the
    pattern), otherwise it joins the nearest matching node. After an epoch the
    per-node centroids are compared with the previous epoch's. If they differ,
    each node's member nearest its centroid is moved to the front of the order
    and the next epoch starts from those exemplars. ``ds`` is never modified.
    """
    _check(ds, params)
    X = ds.features
    d2 = params.delta * params.delta
    rho = params.vigilance
    order = _initial_order(ds, order)

    W, assign = _kernels.run_epoch(X, order, d2, rho, 0)
    history, counts = [], []
    converged = False
    epochs = 1
    while True:
        k = W.shape[0]
        C = _kernels.centroids(X, assign, k)
        if history and same_centroids(C, history[-1]):
            converged = True
        history.append(C)
        counts.append(k)
        if converged or epochs >= params.max_epochs:
            break
        order, n_front = _restart_order(X, order, assign, C)
        seeds = n_front if params.epoch_mode == "seeded" else 0
        W, assign = _kernels.run_epoch(X, order, d2, rho, seeds)
        epochs += 1

    nodes = tuple(
        OutputNode(W[j].copy(), tuple(np.flatnonzero(assign == j).tolist()),
                   int(order[np.argmax(assign[order] == j)]))
        for j in range(W.shape[0])
    )
    assign = assign.copy()
    assign.setflags(write=False)
    return KflannModel(nodes, assign, epochs, converged, history, counts, order, params)


def single_epoch(ds: Dataset, params: KflannParams, order=None) -> np.ndarray:
    """One presentation pass with no centroid step; returns assignments."""
    _check(ds, params)
    order = _initial_order(ds, order)
    _, assign = _kernels.run_epoch(ds.features, order, params.delta * params.delta,
                                   params.vigilance, 0)
    return assign


def extra_epoch(ds: Dataset, model: KflannModel) -> np.ndarray:
    """Run one more epoch after ``model`` finished and return its centroids."""
    params = model.params
    X = ds.features
    order, n_front = _restart_order(X, model.order, np.asarray(model.assignments), model.centroids)
    seeds = n_front if params.epoch_mode == "seeded" else 0
    W, assign = _kernels.run_epoch(X, order, params.delta * params.delta, params.vigilance, seeds)
    return _kernels.centroids(X, assign, W.shape[0])


# ---------------------------------------------------------------- tuning

DOWN = "down-toward-min"
UP = "up-toward-max"


@dataclass(frozen=True, eq=False)
class TuningStep:
    iteration: int
    delta: np.ndarray
    clusters: int
    direction: Optional[str]  # None once the target count is reached

    def to_dict(self):
        return {"iteration": self.iteration, "delta": [float(v) for v in self.delta],
                "clusters": self.clusters, "direction": self.direction}


@dataclass(frozen=True, eq=False)
class TuningTrace:
    steps: tuple
    expected_clusters: int
    reached: bool
    best: int  # index into steps of the returned tolerance
    delta_min: np.ndarray = field(repr=False)
    delta_max: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.steps)

    @property
    def counts(self):
        return [s.clusters for s in self.steps]

    def to_dict(self):
        return {"expected_clusters": self.expected_clusters, "reached": self.reached,
                "best_iteration": self.steps[self.best].iteration,
                "steps": [s.to_dict() for s in self.steps]}


def tune_tolerance(ds: Dataset, params: KflannParams, expected_clusters: int,
                   max_iters: int = 50, *, evaluate: str = "fit",
                   stats: Optional[FeatureStats] = None):
    """Bisect the tolerance between its per-feature gap bounds.

    Starts from the midpoint of ``[delta_min, delta_max]``. Too few clusters
    pulls every ``delta_i`` halfway toward ``delta_min``; too many pushes it
    halfway toward ``delta_max``.

    Parameters
    ----------
    evaluate : {'fit', 'epoch'}
        How the cluster count of each candidate is measured: a full
        centroid-stable :func:`fit`, or a single presentation pass.

    Returns
    -------
    (ToleranceVector, TuningTrace)
        The tolerance that hit ``expected_clusters``, otherwise the one whose
        count came closest (ties go to the later iteration).
    """
    if expected_clusters < 1:
        raise ValueError("expected_clusters must be >= 1")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if evaluate not in ("fit", "epoch"):
        raise ValueError(f"unknown evaluate mode {evaluate!r}")
    stats = stats or fit_stats(ds)
    lo, hi = stats.min_gap, stats.max_gap
    delta = (lo + hi) / 2.0
    steps, best, reached = [], 0, False
    for it in range(1, max_iters + 1):
        p = params.replace(tolerance=ToleranceVector(delta, "tuned"))
        if evaluate == "fit":
            k = fit(ds, p).n_clusters
        else:
            k = int(single_epoch(ds, p).max()) + 1
        if k == expected_clusters:
            direction = None
        elif k < expected_clusters:
            direction = DOWN
        else:
            direction = UP
        steps.append(TuningStep(it, delta.copy(), k, direction))
        if abs(k - expected_clusters) <= abs(steps[best].clusters - expected_clusters):
            best = len(steps) - 1
        if direction is None:
            reached = True
            break
        delta = (delta + lo) / 2.0 if direction == DOWN else (delta + hi) / 2.0
    trace = TuningTrace(tuple(steps), expected_clusters, reached, best, lo, hi)
    return ToleranceVector(steps[best].delta, "tuned"), trace
