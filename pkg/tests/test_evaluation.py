import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kflann.dataset import Dataset
from kflann.evaluation import error_rate, rho_grid, vigilance_sweep
from kflann.preprocess import fit_stats
from kflann.synth import generate, preset
from kflann.tolerance import ToleranceVector, tolerance_maxmin


def labeled(labels):
    return Dataset(np.arange(len(labels), dtype=float), labels)


def test_majority_example():
    ds = labeled(["1", "1", "1", "2", "2", "2", "2", "2"])
    rep = error_rate(np.array([0, 0, 0, 0, 1, 1, 1, 1]), ds)
    assert rep.error_rate_percent == 12.5 and rep.misclassified == 1
    assert rep.mapping == {0: "1", 1: "2"}
    assert rep.confusion.tolist() == [[3, 1], [0, 4]]


def test_pure_clusters_score_zero():
    ds = labeled(list("aabbcc"))
    assert error_rate(np.array([0, 0, 1, 1, 2, 3]), ds).error_rate_percent == 0.0


def test_single_cluster_over_iris(iris):
    rep = error_rate(np.zeros(len(iris), dtype=int), iris)
    assert rep.misclassified == 100
    assert rep.error_rate_percent == pytest.approx(66.6667, abs=1e-4)


def test_tie_goes_to_earliest_member():
    ds = labeled(["b", "a", "a", "b"])
    rep = error_rate(np.array([0, 0, 1, 1]), ds)
    assert rep.mapping == {0: "b", 1: "a"}


def test_needs_labels_and_matching_length():
    with pytest.raises(ValueError, match="labeled"):
        error_rate(np.zeros(2, dtype=int), Dataset(np.zeros((2, 1))))
    with pytest.raises(ValueError):
        error_rate(np.zeros(3, dtype=int), labeled(["a", "b"]))


cases = st.integers(1, 40).flatmap(lambda n: st.tuples(
    st.lists(st.sampled_from("xyz"), min_size=n, max_size=n),
    st.lists(st.integers(0, 5), min_size=n, max_size=n)))


@settings(max_examples=150, deadline=None)
@given(cases, st.permutations(range(6)))
def test_error_properties(case, perm):
    labels, assign = case
    assign = np.array(assign)
    ds = labeled(labels)
    rep = error_rate(assign, ds)
    assert 0 <= rep.error_rate_percent <= 100
    assert rep.misclassified / rep.total * 100 == pytest.approx(rep.error_rate_percent, rel=1e-12)
    relabeled = error_rate(np.array(perm)[assign], ds)
    assert relabeled.error_rate_percent == rep.error_rate_percent
    pure = all(len({labels[i] for i in np.flatnonzero(assign == j)}) <= 1 for j in set(assign))
    assert (rep.error_rate_percent == 0) == pure


def test_sweep_bounds():
    X = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, 1.0], [0.5, 0.5]])
    ds = Dataset(X, list("abab"))
    res = vigilance_sweep(ds, ToleranceVector(np.zeros(2)), [0, 1])
    assert res.clusters == [1, 4]
    assert vigilance_sweep(ds, ToleranceVector(np.zeros(2)), [0]).clusters == [1]


def test_sweep_on_well_separated_preset():
    ds = generate(preset(1))
    res = vigilance_sweep(ds, tolerance_maxmin(fit_stats(ds)), [1])
    assert res.clusters == [2] and res.errors == [0.0]


@pytest.mark.parametrize("grid", [[], [0.5, 0.5], [0.6, 0.2], [1.2]])
def test_sweep_grid_validation(grid):
    with pytest.raises(ValueError):
        vigilance_sweep(labeled(["a"]), ToleranceVector([0.0]), grid)


def test_rho_grid():
    g = rho_grid(0, 1, 0.1)
    assert len(g) == 11 and g[0] == 0 and g[-1] == 1 and g[3] == 0.3
