import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from kflann.dataset import Dataset
from kflann.preprocess import fit_stats
from kflann.tolerance import (ToleranceVector, make_tolerance, tolerance_manual,
                              tolerance_maxmin, tolerance_stddev)


def stats_of(*cols):
    return fit_stats(Dataset(np.array(cols, dtype=float).T))


def test_stddev_examples():
    t = tolerance_stddev(stats_of([1, 2, 3], [4, 4, 4]))
    np.testing.assert_allclose(t.delta, [0.816496580927726, 0.0])
    assert t.method == "stddev"


def test_stddev_equals_iris_sigma(iris):
    np.testing.assert_array_equal(tolerance_stddev(fit_stats(iris)).delta, iris.features.std(axis=0))


@pytest.mark.parametrize("column, delta", [([1, 2, 4], 2.0), ([7, 7], 0.0), ([0, 10], 10.0)])
def test_maxmin_examples(column, delta):
    assert tolerance_maxmin(stats_of(column)).delta[0] == delta


def test_manual():
    assert list(tolerance_manual([0.5, 0.5], 2).delta) == [0.5, 0.5]
    with pytest.raises(ValueError, match=">= 0"):
        tolerance_manual([-1])
    with pytest.raises(ValueError, match="expected 4"):
        tolerance_manual([], 4)
    with pytest.raises(ValueError, match="finite"):
        tolerance_manual([np.inf])


def test_make_tolerance_dispatch():
    s = stats_of([1, 2, 4])
    assert make_tolerance("maxmin", s).delta[0] == 2.0
    assert make_tolerance("manual", s, [0.25]).delta[0] == 0.25
    with pytest.raises(ValueError):
        make_tolerance("manual", s)
    with pytest.raises(ValueError):
        make_tolerance("domain", s)


def test_vector_is_frozen():
    t = ToleranceVector([1.0, 2.0])
    with pytest.raises(ValueError):
        t.delta[0] = 3.0


columns = hnp.arrays(np.float64, st.integers(2, 25),
                     elements=st.floats(-1e4, 1e4, allow_nan=False).map(lambda v: round(v, 2)))


@settings(max_examples=80, deadline=None)
@given(columns)
def test_maxmin_between_gaps(x):
    s = stats_of(x)
    d = tolerance_maxmin(s).delta[0]
    assert s.min_gap[0] <= d <= s.max_gap[0]


@settings(max_examples=80, deadline=None)
@given(columns, st.floats(-100, 100).map(lambda v: round(v, 1)), st.sampled_from([0.5, 2.0, 4.0]))
def test_shift_and_scale(x, shift, c):
    base = tolerance_stddev(stats_of(x)).delta[0]
    assert tolerance_stddev(stats_of(x + shift)).delta[0] == pytest.approx(base, rel=1e-9, abs=1e-6)
    assert tolerance_stddev(stats_of(c * x)).delta[0] == pytest.approx(c * base, rel=1e-12, abs=1e-12)
    assert tolerance_maxmin(stats_of(c * x)).delta[0] == pytest.approx(
        c * tolerance_maxmin(stats_of(x)).delta[0], rel=1e-12, abs=1e-12)
