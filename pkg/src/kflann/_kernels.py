"""Hot loops of the network, in numba and plain numpy.

Both backends accumulate squared distances feature by feature in the same
order so they produce bit-identical results. Set ``KFLANN_DISABLE_NUMBA=1``
to force the numpy path, or call :func:`use_backend` at runtime.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

_DISABLED = os.environ.get("KFLANN_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
_backend = "numba" if NUMBA_AVAILABLE and not _DISABLED else "numpy"


# ---------------------------------------------------------------- numpy

def _epoch_np(X, order, d2, rho, n_seeds):
    N, n = X.shape
    W = np.empty((N, n))
    assign = np.empty(N, dtype=np.int64)
    k = 0
    for t in range(order.shape[0]):
        p = order[t]
        x = X[p]
        if t < n_seeds or k == 0:
            W[k] = x
            assign[p] = k
            k += 1
            continue
        sq = (W[:k] - x) ** 2
        hits = np.count_nonzero(d2 - sq >= 0.0, axis=1)
        ok = hits / n >= rho
        if not ok.any():
            W[k] = x
            assign[p] = k
            k += 1
            continue
        dist = sq[:, 0].copy()
        for i in range(1, n):
            dist += sq[:, i]
        dist[~ok] = np.inf
        assign[p] = int(np.argmin(dist))
    return W[:k].copy(), assign


def _centroids_np(X, assign, k):
    counts = np.bincount(assign, minlength=k).astype(np.float64)
    C = np.empty((k, X.shape[1]))
    for i in range(X.shape[1]):
        C[:, i] = np.bincount(assign, weights=X[:, i], minlength=k) / counts
    return C


def _nearest_np(X, assign, C):
    diff = X - C[assign]
    sq = diff * diff
    dist = sq[:, 0].copy()
    for i in range(1, X.shape[1]):
        dist += sq[:, i]
    idx = np.arange(X.shape[0])
    # group by node, then smallest distance, then lowest pattern index
    srt = np.lexsort((idx, dist, assign))
    first = np.ones(srt.shape[0], dtype=bool)
    first[1:] = assign[srt[1:]] != assign[srt[:-1]]
    return srt[first].astype(np.int64)


# ---------------------------------------------------------------- numba

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _epoch_nb(X, order, d2, rho, n_seeds):
        N, n = X.shape
        W = np.empty((N, n))
        assign = np.empty(N, dtype=np.int64)
        k = 0
        for t in range(order.shape[0]):
            p = order[t]
            best = -1
            if t >= n_seeds:
                bd = np.inf
                for j in range(k):
                    hits = 0
                    d = 0.0
                    for i in range(n):
                        diff = W[j, i] - X[p, i]
                        s = diff * diff
                        if d2[i] - s >= 0.0:
                            hits += 1
                        d += s
                    if hits / n >= rho and d < bd:
                        bd = d
                        best = j
            if best < 0:
                for i in range(n):
                    W[k, i] = X[p, i]
                best = k
                k += 1
            assign[p] = best
        return W[:k].copy(), assign

    @njit(cache=True)
    def _centroids_nb(X, assign, k):
        N, n = X.shape
        S = np.zeros((k, n))
        counts = np.zeros(k)
        for p in range(N):
            j = assign[p]
            counts[j] += 1.0
            for i in range(n):
                S[j, i] += X[p, i]
        for j in range(k):
            for i in range(n):
                S[j, i] /= counts[j]
        return S

    @njit(cache=True)
    def _nearest_nb(X, assign, C):
        N, n = X.shape
        k = C.shape[0]
        best = np.full(k, -1, dtype=np.int64)
        bd = np.full(k, np.inf)
        for p in range(N):
            j = assign[p]
            d = 0.0
            for i in range(n):
                diff = X[p, i] - C[j, i]
                d += diff * diff
            if d < bd[j]:
                bd[j] = d
                best[j] = p
        return best


# ---------------------------------------------------------------- dispatch

def get_backend() -> str:
    return _backend


def use_backend(name: str) -> str:
    """Select ``'numba'`` or ``'numpy'``; returns the previous backend."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    prev, _backend = _backend, name
    return prev


def run_epoch(X, order, d2, rho, n_seeds=0):
    """Present ``X[order]`` once to an empty network.

    The first ``n_seeds`` patterns of ``order`` found nodes unconditionally.
    Returns ``(weights, assign)`` with node ids in creation order.
    """
    order = np.ascontiguousarray(order, dtype=np.int64)
    if _backend == "numba":
        return _epoch_nb(X, order, d2, float(rho), int(n_seeds))
    return _epoch_np(X, order, d2, float(rho), int(n_seeds))


def centroids(X, assign, k):
    assign = np.ascontiguousarray(assign, dtype=np.int64)
    if _backend == "numba":
        return _centroids_nb(X, assign, int(k))
    return _centroids_np(X, assign, int(k))


def nearest_members(X, assign, C):
    """Per node, the member pattern closest to its centroid (ties: lowest index)."""
    assign = np.ascontiguousarray(assign, dtype=np.int64)
    if _backend == "numba":
        return _nearest_nb(X, assign, C)
    return _nearest_np(X, assign, C)
