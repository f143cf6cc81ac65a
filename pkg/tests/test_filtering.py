import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import alpha_closed_form, alpha_grid
from swipefusion.filtering import (FilterParams, adaptive_smooth, alpha_objective, estimate_velocity,
                                   optimize_alpha, smooth)
from swipefusion.trajectory import Trajectory, TrajectoryError


def _traj(xs):
    xs = np.asarray(xs, dtype=float)
    return Trajectory(np.arange(len(xs)) / 60, np.column_stack([xs, -xs]))


def test_boundaries():
    assert optimize_alpha(FilterParams(lam=0.75, sigma=0.0, delta=1.0)) == 1.0
    assert optimize_alpha(FilterParams(lam=0.75, sigma=1.0, delta=0.0)) == 0.01
    assert optimize_alpha(FilterParams(lam=0.75, sigma=0.0, delta=1.0, alpha_max=0.8)) == 0.8


def test_example_against_grid():
    a = optimize_alpha(FilterParams(lam=0.75, sigma=1.0, delta=0.1))
    assert abs(a - alpha_grid(0.75, 1.0, 0.1)) <= 1e-3
    assert abs(a - alpha_closed_form(0.75, 1.0, 0.1)) <= 1e-6


@settings(max_examples=150, deadline=None)
@given(lam=st.floats(0.05, 0.95), sigma=st.floats(1e-3, 5.0), delta=st.floats(1e-3, 5.0))
def test_beats_every_coarse_grid_point(lam, sigma, delta):
    a = optimize_alpha(FilterParams(lam=lam, sigma=sigma, delta=delta))
    assert 0.01 <= a <= 1.0
    grid = np.arange(0.01, 1.0 + 1e-9, 1e-3)
    f = alpha_objective(grid, lam, sigma, delta)
    assert alpha_objective(a, lam, sigma, delta) <= f.min() + 1e-12
    assert abs(a - alpha_closed_form(lam, sigma, delta)) <= 1e-6


def test_params_validated():
    with pytest.raises(ValueError):
        FilterParams(lam=1.5)
    with pytest.raises(ValueError):
        FilterParams(alpha_min=0.5, alpha_max=0.4)
    with pytest.raises(ValueError):
        FilterParams(sigma=-1)


def test_smooth_examples():
    tr = _traj([0, 1, 1, 1, 1])
    assert smooth(tr, 1.0) == tr
    assert np.allclose(smooth(tr, 0.5).xy[:, 0], [0, 0.5, 0.75, 0.875, 0.9375])
    const = _traj([3.0] * 6)
    assert np.array_equal(smooth(const, 0.3).xy, const.xy)


def test_smooth_errors():
    with pytest.raises(TrajectoryError):
        smooth(Trajectory([], np.zeros((0, 2))), 0.5)
    with pytest.raises(ValueError):
        smooth(_traj([0, 1]), 0.0)


@settings(max_examples=100, deadline=None)
@given(xs=st.lists(st.floats(-100, 100), min_size=1, max_size=40), alpha=st.floats(0.01, 1.0))
def test_smooth_properties(xs, alpha):
    tr = _traj(xs)
    out = smooth(tr, alpha)
    base = out.xy[0]
    assert np.all(np.abs(out.xy - base).max(axis=0) <= np.abs(tr.xy - base).max(axis=0) + 1e-9)
    assert smooth(smooth(tr, 1.0), alpha) == out


def test_velocity_estimate_constant_speed():
    v = estimate_velocity(np.column_stack([np.arange(30) * 0.2, np.zeros(30)]))
    assert np.allclose(v, 0.2)


def test_adaptive_smooth_keeps_shape(layout):
    tr = _traj(np.linspace(0, 5, 40))
    out = adaptive_smooth(tr, FilterParams())
    assert len(out) == len(tr) and np.array_equal(out.t, tr.t)
    assert np.array_equal(out.xy[0], tr.xy[0])
    assert adaptive_smooth(_traj([1.0]), FilterParams()) == _traj([1.0])
