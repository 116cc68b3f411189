import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from kflann.dataset import Dataset
from kflann.network import (DOWN, UP, KflannParams, OutputNode, extra_epoch, find_matches,
                            fit, match_score, parse_vigilance, same_centroids, snap_vigilance,
                            tune_tolerance, vigilance_from_counts, winner)
from kflann.preprocess import fit_stats
from kflann.tolerance import ToleranceVector, tolerance_maxmin

from conftest import load_named


def node(*w):
    return OutputNode(np.array(w, dtype=float))


# ---------------------------------------------------------------- matching

@pytest.mark.parametrize("w, x, delta, score", [
    ([0, 0], [0.5, 2], [1, 1], 0.5),
    ([3, -1, 2], [3, -1, 2], [0, 0, 0], 1.0),
    ([0, 0], [1, -1], [0, 0], 0.0),
    ([0, 0], [1, 0], [1, 0], 1.0),  # boundary counts as a match
])
def test_match_score(w, x, delta, score):
    assert match_score(node(*w), np.array(x, float), np.array(delta, float)) == score


def test_match_score_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        match_score(node(0, 0), np.zeros(3), np.ones(2))


def test_find_matches_thresholds():
    nodes = [node(0, 0), node(0.5, 3), node(9, 9)]
    x = np.array([0.2, 0.2])
    p0 = KflannParams(0, [1, 1])
    assert find_matches(nodes, x, p0) == [0, 1, 2]
    assert find_matches(nodes, x, KflannParams(1, [1, 1])) == [0]
    assert find_matches(nodes, x, KflannParams(0.5, [1, 1])) == [0, 1]


def test_four_of_twelve_features():
    rho = vigilance_from_counts(4, 12)
    delta = np.full(12, 0.5)
    w = np.zeros(12)
    x = np.r_[np.zeros(4), np.full(8, 5.0)]
    assert find_matches([OutputNode(w)], x, KflannParams(rho, delta)) == [0]
    x[3] = 5.0
    assert find_matches([OutputNode(w)], x, KflannParams(rho, delta)) == []


def test_winner_examples():
    nodes = [node(0, 0), node(1, 1)]
    assert winner([0, 1], np.array([0.1, 0.1]), nodes) == 0
    assert winner([0, 1], np.array([0.5, 0.5]), nodes) == 0
    assert winner([1], np.array([0.1, 0.1]), nodes) == 1
    with pytest.raises(ValueError):
        winner([], np.zeros(2), nodes)


def test_winner_matches_brute_force_on_200_instances():
    rng = np.random.default_rng(20240601)
    for _ in range(200):
        k, n = rng.integers(1, 21), rng.integers(1, 6)
        W = rng.integers(-3, 4, size=(k, n)).astype(float)  # integer grid forces ties
        x = rng.integers(-3, 4, size=n).astype(float)
        matched = sorted(rng.choice(k, size=rng.integers(1, k + 1), replace=False).tolist())
        j = winner(matched, x, [OutputNode(w) for w in W])
        d = ((W[matched] - x) ** 2).sum(axis=1)
        assert j in matched
        assert d[matched.index(j)] == d.min()
        assert j == matched[int(np.argmin(d))]


@pytest.mark.parametrize("counts, value", [((18, 34), 0.5294), ((5, 8), 0.625), ((0, 7), 0.0)])
def test_vigilance_from_counts(counts, value):
    assert round(vigilance_from_counts(*counts), 4) == value


@pytest.mark.parametrize("bad", [(3, 2), (-1, 2), (0, 0)])
def test_vigilance_from_counts_errors(bad):
    with pytest.raises(ValueError):
        vigilance_from_counts(*bad)


def test_parse_and_snap_vigilance():
    assert parse_vigilance("18/34") == 18 / 34
    assert parse_vigilance(" 0.5 ") == 0.5
    for bad in ("3", "-0.1", "a/b", "1/0"):
        with pytest.raises(ValueError):
            parse_vigilance(bad)
    assert snap_vigilance(0.6667, 3) == 2 / 3
    assert snap_vigilance(0.9474, 19) == 18 / 19
    assert snap_vigilance(0.9, 19) == 0.9
    assert snap_vigilance(0.6667, 3) * 3 >= 2


def test_params_validation():
    with pytest.raises(ValueError):
        KflannParams(1.5, [1.0])
    with pytest.raises(ValueError):
        KflannParams(0.5, [1.0], max_epochs=0)
    with pytest.raises(ValueError):
        KflannParams(0.5, [1.0], epoch_mode="other")
    with pytest.raises(ValueError, match="tolerance"):
        fit(Dataset(np.zeros((2, 2))), KflannParams(1, [1.0]))


# ---------------------------------------------------------------- fit

def test_two_distant_points():
    m = fit(Dataset([[0.0], [10.0]]), KflannParams(1, [1.0]))
    assert m.n_clusters == 2 and m.converged and m.epochs_run == 2
    assert [nd.members for nd in m.nodes] == [(0,), (1,)]


def test_iris_three_clusters(iris):
    m = fit(iris, KflannParams(1, tolerance_maxmin(fit_stats(iris))))
    assert m.n_clusters == 3 and m.converged


def test_unconverged_at_epoch_limit(iris):
    m = fit(iris, KflannParams(1, tolerance_maxmin(fit_stats(iris)), max_epochs=1))
    assert m.epochs_run == 1 and not m.converged


def test_rebuild_mode_runs(iris):
    m = fit(iris, KflannParams(1, tolerance_maxmin(fit_stats(iris)), epoch_mode="rebuild"))
    assert m.n_clusters >= 1 and m.epochs_run >= 2


def test_order_argument(toy):
    m = fit(toy, KflannParams(1, [1.0, 1.0]), order=[2, 3, 0, 1])
    assert m.n_clusters == 2
    assert m.assignments[0] == m.assignments[1] != m.assignments[2]
    with pytest.raises(ValueError):
        fit(toy, KflannParams(1, [1.0, 1.0]), order=[0, 0, 1, 2])


small = hnp.arrays(
    np.float64, st.tuples(st.integers(1, 20), st.integers(1, 4)),
    elements=st.integers(-20, 20).map(lambda v: v / 4))
rhos = st.sampled_from([0.0, 0.25, 1 / 3, 0.5, 2 / 3, 0.75, 1.0])
scales = st.sampled_from([0.0, 0.3, 1.0, 2.5])


@settings(max_examples=150, deadline=None)
@given(small, rhos, scales)
def test_partition_and_founders(X, rho, scale):
    ds = Dataset(X)
    params = KflannParams(rho, np.full(X.shape[1], scale))
    m = fit(ds, params)
    members = sorted(i for nd in m.nodes for i in nd.members)
    assert members == list(range(len(X)))
    for j, nd in enumerate(m.nodes):
        assert all(m.assignments[i] == j for i in nd.members)
        # founding copy and self-match
        assert np.array_equal(nd.weights, X[nd.founder])
        assert match_score(nd, X[nd.founder], params.delta) == 1.0


@settings(max_examples=60, deadline=None)
@given(small, scales)
def test_zero_vigilance_gives_one_cluster(X, scale):
    assert fit(Dataset(X), KflannParams(0, np.full(X.shape[1], scale))).n_clusters == 1


@settings(max_examples=60, deadline=None)
@given(small)
def test_zero_tolerance_full_vigilance_separates_distinct(X):
    X = np.unique(X, axis=0)
    m = fit(Dataset(X), KflannParams(1, np.zeros(X.shape[1])))
    assert m.n_clusters == len(X)


@settings(max_examples=60, deadline=None)
@given(small, rhos, scales)
def test_deterministic(X, rho, scale):
    ds = Dataset(X)
    p = KflannParams(rho, np.full(X.shape[1], scale))
    a, b = fit(ds, p), fit(Dataset(X.copy()), p)
    assert np.array_equal(a.assignments, b.assignments)
    assert a.epochs_run == b.epochs_run and a.cluster_history == b.cluster_history


@settings(max_examples=100, deadline=None)
@given(small, rhos, scales)
def test_convergence_audit(X, rho, scale):
    ds = Dataset(X)
    m = fit(ds, KflannParams(rho, np.full(X.shape[1], scale)))
    if m.converged:
        assert same_centroids(extra_epoch(ds, m), m.centroids, 1e-12)
        assert same_centroids(m.centroid_history[-1], m.centroid_history[-2], 1e-12)


def test_same_centroids_is_order_free():
    A = np.array([[1.0, 2.0], [0.0, 5.0]])
    assert same_centroids(A, A[::-1])
    assert not same_centroids(A, A[:1])
    assert not same_centroids(A, A + 1e-9)


# ---------------------------------------------------------------- tuning

def test_tuning_immediate_success():
    ds = Dataset([[0.0], [1.0], [100.0]])
    delta, trace = tune_tolerance(ds, KflannParams(1, [1.0]), 2)
    assert len(trace) == 1 and trace.reached and trace.steps[0].direction is None
    assert delta.delta[0] == 50.5  # midpoint of gaps 1 and 100


def test_tuning_new_thyroid_moves_up_first():
    ds = load_named("new_thyroid")
    params = KflannParams(1, tolerance_maxmin(fit_stats(ds)))
    assert fit(ds, params).n_clusters != 3
    delta, trace = tune_tolerance(ds, params, 3)
    assert trace.steps[0].direction == UP
    assert trace.reached and fit(ds, params.replace(tolerance=delta)).n_clusters == 3


def test_tuning_unreachable_returns_closest():
    ds = Dataset([[0.0], [1.0], [2.0]])
    delta, trace = tune_tolerance(ds, KflannParams(1, [1.0]), 5, max_iters=6)
    assert not trace.reached and len(trace) == 6
    assert all(s.direction == DOWN for s in trace.steps)
    assert trace.best == 5  # ties go to the later iteration
    assert np.array_equal(delta.delta, trace.steps[-1].delta)


def test_tuning_argument_checks(toy):
    p = KflannParams(1, [1.0, 1.0])
    for kw in (dict(expected_clusters=0), dict(expected_clusters=2, max_iters=0),
               dict(expected_clusters=2, evaluate="x")):
        with pytest.raises(ValueError):
            tune_tolerance(toy, p, **kw)


@settings(max_examples=50, deadline=None)
@given(small, rhos, st.integers(1, 6), st.sampled_from(["fit", "epoch"]))
def test_tuning_containment(X, rho, k, evaluate):
    ds = Dataset(X)
    s = fit_stats(ds)
    _, trace = tune_tolerance(ds, KflannParams(rho, np.zeros(X.shape[1])), k, 12,
                              evaluate=evaluate)
    for step in trace.steps:
        assert np.all(step.delta >= s.min_gap) and np.all(step.delta <= s.max_gap)
    assert trace.steps[trace.best].clusters in trace.counts
    best_gap = min(abs(c - k) for c in trace.counts)
    assert abs(trace.steps[trace.best].clusters - k) == best_gap
