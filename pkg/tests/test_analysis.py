import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radarlte.analysis import (
    NonMonotoneLossError, RunMismatchError, SweepResult, cdf_at, exclusion_zone_km,
    mean_loss_percent, stochastically_dominates, throughput_cdf,
)
from radarlte.lte_uplink import ThroughputReport


def _rep(values, cells=None):
    v = np.asarray(values, dtype=float)
    return ThroughputReport(v, np.zeros(v.size, int) if cells is None else np.asarray(cells), 1.0)


def test_cdf_examples():
    x, p = throughput_cdf(_rep([5.0, 5.0, 5.0]))
    assert np.all(x == 5.0) and p[-1] == 1.0
    x, p = throughput_cdf([3.0, 1.0, 2.0, 4.0])
    assert list(x) == [1, 2, 3, 4] and list(p) == [0.25, 0.5, 0.75, 1.0]
    with pytest.raises(ValueError):
        throughput_cdf([])


@given(st.lists(st.floats(min_value=0, max_value=1e9), min_size=1, max_size=200))
def test_cdf_is_distribution(vals):
    x, p = throughput_cdf(vals)
    assert len(x) == len(vals)
    assert np.all(np.diff(x) >= 0) and np.all(np.diff(p) > 0)
    assert 0 < p[0] and p[-1] == 1.0


def test_mean_loss_examples():
    b = _rep([2.0, 4.0])
    assert mean_loss_percent(b, b) == 0.0
    assert mean_loss_percent(_rep([1.0, 2.0]), b) == pytest.approx(50.0)
    assert mean_loss_percent(_rep([3.0, 4.0]), b) < 0  # sign kept
    with pytest.raises(RunMismatchError):
        mean_loss_percent(_rep([1.0, 2.0], [0, 1]), b)


def test_dominance():
    base = _rep([1.0, 2.0, 3.0])
    assert stochastically_dominates(base, _rep([0.5, 2.0, 2.5]))
    assert not stochastically_dominates(base, _rep([0.5, 2.0, 3.5]))
    assert cdf_at(_rep([0.5, 2.0, 2.5]), 2.2) >= cdf_at(base, 2.2)


def test_exclusion_zone_examples():
    z = exclusion_zone_km({50: 10.0, 100: 4.0}, 5.0)
    assert z.distance_km == pytest.approx(91.6667, abs=1e-3)
    assert z.bracket == ((50.0, 10.0), (100.0, 4.0))
    assert exclusion_zone_km({50: 10.0, 100: 4.0}, 20.0).distance_km == 50.0
    never = exclusion_zone_km({50: 10.0, 100: 8.0}, 5.0)
    assert never.distance_km == math.inf and not never.bounded
    with pytest.raises(NonMonotoneLossError):
        exclusion_zone_km({50: 4.0, 100: 10.0}, 5.0)


@given(st.lists(st.floats(min_value=0, max_value=100), min_size=2, max_size=6),
       st.floats(min_value=0, max_value=100), st.floats(min_value=0, max_value=100))
def test_exclusion_zone_non_increasing_in_threshold(losses, t1, t2):
    losses = sorted(losses, reverse=True)
    sweep = {50.0 * (i + 1): v for i, v in enumerate(losses)}
    lo, hi = sorted((t1, t2))
    assert exclusion_zone_km(sweep, hi).distance_km <= exclusion_zone_km(sweep, lo).distance_km + 1e-9


def test_sweep_permutation_invariant():
    base = _rep([10.0, 10.0])
    items = [((50.0, 0.0, "macro"), _rep([5.0, 5.0])), ((100.0, 0.0, "macro"), _rep([9.0, 9.0])),
             ((50.0, 5.0, "macro"), _rep([8.0, 8.0]))]
    a = SweepResult(base, dict(items))
    b = SweepResult(base, dict(reversed(items)))
    assert a.rows() == b.rows()
    assert a.losses_by_distance(0.0) == {50.0: pytest.approx(50.0), 100.0: pytest.approx(10.0)}
