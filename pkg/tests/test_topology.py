import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dissom import ConfigurationError, KernelSchedule, MapTopology, graph_distance, kernel, temperature_at

import oracles


def test_graph_distance_examples():
    topo = MapTopology(10, 3)
    assert topo.m == 30
    assert graph_distance(topo, 7, 7) == 0
    assert graph_distance(topo, topo.index(0, 0), topo.index(9, 2)) == 11
    assert graph_distance(topo, topo.index(4, 1), topo.index(4, 2)) == 1


def test_graph_distance_bounds():
    with pytest.raises(IndexError):
        graph_distance(MapTopology(2, 2), 0, 4)


@pytest.mark.parametrize("rows, cols", [(1, 1), (1, 5), (4, 1), (3, 3), (10, 3), (5, 7)])
def test_delta_equals_bfs(rows, cols):
    topo = MapTopology(rows, cols)
    assert topo.delta.tolist() == oracles.grid_bfs_distances(rows, cols)


def test_edge_count():
    assert len(MapTopology(10, 3).edges()) == 47
    assert len(MapTopology(2, 1).edges()) == 1
    assert MapTopology(1, 1).edges() == []


@pytest.mark.parametrize("rows, cols", [(0, 3), (3, -1)])
def test_invalid_grid(rows, cols):
    with pytest.raises(ConfigurationError):
        MapTopology(rows, cols)


def test_kernel_values():
    assert kernel(0, 0.7) == 1.0
    assert kernel(1, 1.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert kernel(1, 1.0) == pytest.approx(0.367879, abs=1e-6)
    assert kernel(3, 0.5) == pytest.approx(math.exp(-36), rel=1e-12)
    assert kernel(3, 0.5) < 3e-16


def test_kernel_cutoff():
    assert kernel(3, 0.5, cutoff=1e-12) == 0.0
    assert kernel(1, 1.0, cutoff=1e-12) == pytest.approx(math.exp(-1))


@pytest.mark.parametrize("T", [0, -1])
def test_kernel_rejects_nonpositive_temperature(T):
    with pytest.raises(ConfigurationError):
        kernel(1, T)


@given(st.integers(0, 8), st.integers(0, 8), st.floats(0.2, 10))
def test_kernel_monotone_in_delta(d1, d2, T):
    if d1 < d2 and kernel(d2, T) > 0:
        assert kernel(d1, T) > kernel(d2, T)


@given(st.integers(1, 8), st.floats(0.2, 10), st.floats(0.2, 10))
def test_kernel_monotone_in_temperature(d, T1, T2):
    if T1 < T2 and kernel(d, T2) < 1.0 and kernel(d, T1) > 0:
        assert kernel(d, T1) < kernel(d, T2)


def test_schedule_examples():
    s = KernelSchedule(8.0, 0.5, 5)
    assert temperature_at(s, 0) == 8.0
    assert temperature_at(s, 4) == 0.5
    assert temperature_at(s, 2) == pytest.approx(2.0, rel=1e-12)
    assert KernelSchedule(3.0, 0.5, 1).temperature_at(0) == 0.5


def test_schedule_monotone():
    s = KernelSchedule(5.0, 0.3, 40)
    temps = [s.temperature_at(t) for t in range(40)]
    assert all(a >= b for a, b in zip(temps, temps[1:]))


def test_schedule_validation():
    with pytest.raises(ConfigurationError):
        KernelSchedule(0.5, 1.0, 10)
    with pytest.raises(ConfigurationError):
        KernelSchedule(1.0, 0.0, 10)
    with pytest.raises(ConfigurationError):
        KernelSchedule(1.0, 0.5, 0)
    with pytest.raises(IndexError):
        KernelSchedule(1.0, 0.5, 3).temperature_at(3)


def test_default_schedule():
    s = KernelSchedule.default_for(MapTopology(10, 3))
    assert (s.t_max, s.t_min, s.n_iter) == (5.0, 0.5, 50)
