"""Rectangular neuron grid, graph distance and neighborhood kernel."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class MapTopology:
    """A ``rows x cols`` grid of neurons with 4-neighbor connectivity.

    Neurons are indexed ``0..m-1`` in row-major order, so neuron ``k`` sits
    at grid coordinate ``(k // cols, k % cols)``. The graph distance between
    two neurons is the shortest path length on the grid, i.e. the Manhattan
    distance between their coordinates.
    """

    rows: int
    cols: int

    def __post_init__(self):
        if int(self.rows) != self.rows or int(self.cols) != self.cols:
            raise ConfigurationError("rows and cols must be integers")
        if self.rows < 1 or self.cols < 1:
            raise ConfigurationError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")
        coords = self.coords
        delta = np.abs(coords[:, None, :] - coords[None, :, :]).sum(axis=2)
        delta.setflags(write=False)
        object.__setattr__(self, "delta", delta)

    @property
    def m(self) -> int:
        return self.rows * self.cols

    @property
    def coords(self) -> np.ndarray:
        k = np.arange(self.rows * self.cols)
        return np.stack([k // self.cols, k % self.cols], axis=1)

    def index(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise IndexError(f"grid position ({row}, {col}) outside {self.rows}x{self.cols}")
        return row * self.cols + col

    def edges(self) -> list[tuple[int, int]]:
        """Grid edges ``(c, r)`` with ``c < r``, in a fixed order."""
        return [(c, r) for c in range(self.m) for r in range(c + 1, self.m) if self.delta[c, r] == 1]

    def kernel_matrix(self, T: float, cutoff: float = 0.0) -> np.ndarray:
        """``(m, m)`` array of ``kernel(delta[c, r], T)``."""
        return kernel(self.delta, T, cutoff)


def graph_distance(topology: MapTopology, c: int, r: int) -> int:
    m = topology.m
    if not (0 <= c < m and 0 <= r < m):
        raise IndexError(f"neuron index out of range [0, {m}): ({c}, {r})")
    return int(topology.delta[c, r])


def kernel(delta, T: float, cutoff: float = 0.0):
    """Gaussian neighborhood kernel ``exp(-delta**2 / T**2)``.

    Values strictly below ``cutoff`` are set to zero; the default keeps every
    value.
    """
    if not T > 0:
        raise ConfigurationError(f"temperature must be positive, got {T}")
    delta = np.asarray(delta, dtype=float)
    k = np.exp(-(delta**2) / (T * T))
    if cutoff > 0:
        k = np.where(k < cutoff, 0.0, k)
    return k if k.ndim else float(k)


@dataclass(frozen=True)
class KernelSchedule:
    """Geometric decay of the temperature from ``t_max`` to ``t_min``."""

    t_max: float
    t_min: float
    n_iter: int

    def __post_init__(self):
        if not (self.t_min > 0 and self.t_max >= self.t_min):
            raise ConfigurationError(
                f"need t_max >= t_min > 0, got t_max={self.t_max}, t_min={self.t_min}"
            )
        if int(self.n_iter) != self.n_iter or self.n_iter < 1:
            raise ConfigurationError(f"n_iter must be a positive integer, got {self.n_iter}")

    @classmethod
    def default_for(cls, topology: MapTopology, t_min: float = 0.5, n_iter: int = 50):
        return cls(max(max(topology.rows, topology.cols) / 2.0, t_min), t_min, n_iter)

    def temperature_at(self, t: int) -> float:
        if not 0 <= t < self.n_iter:
            raise IndexError(f"iteration {t} outside [0, {self.n_iter})")
        if self.n_iter == 1:
            return float(self.t_min)
        if t == self.n_iter - 1:
            return float(self.t_min)
        return float(self.t_max * (self.t_min / self.t_max) ** (t / (self.n_iter - 1)))


def temperature_at(schedule: KernelSchedule, t: int) -> float:
    return schedule.temperature_at(t)
