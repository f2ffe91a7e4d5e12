"""Grid-search maximum-likelihood estimation of the emitter position."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .channel import ChannelParams, Measurement, Point2, expected_rss, expected_rss_grid
from .errors import ConfigError

# Objective values within this relative band of the minimum count as ties.
TIE_RTOL = 1e-12


@dataclass(frozen=True, slots=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    resolution: float = 1.0

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ConfigError(f"empty grid extent {self}")
        if not self.resolution > 0:
            raise ConfigError(f"grid resolution must be positive, got {self.resolution}")

    @classmethod
    def centered(cls, center: Point2, half_width: float, resolution: float = 1.0) -> GridSpec:
        return cls(center.x - half_width, center.x + half_width,
                   center.y - half_width, center.y + half_width, resolution)

    @property
    def shape(self) -> tuple[int, int]:
        """(ny, nx) point counts."""
        nx = int(math.floor((self.x_max - self.x_min) / self.resolution + 1e-9)) + 1
        ny = int(math.floor((self.y_max - self.y_min) / self.resolution + 1e-9)) + 1
        return ny, nx

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        ny, nx = self.shape
        xs = self.x_min + self.resolution * np.arange(nx)
        ys = self.y_min + self.resolution * np.arange(ny)
        return xs, ys

    def point(self, flat_index: int) -> Point2:
        """Grid point at a row-major scan index (y outer, x inner)."""
        ny, nx = self.shape
        iy, ix = divmod(int(flat_index), nx)
        return Point2(self.x_min + self.resolution * ix, self.y_min + self.resolution * iy)

    def contains(self, p: Point2) -> bool:
        return self.x_min <= p.x <= self.x_max and self.y_min <= p.y <= self.y_max


def residual_objective(measurements: Sequence[Measurement], candidate: Point2,
                       params: ChannelParams, d_min: float) -> float:
    """Sum of squared dB residuals of ``candidate`` against every measurement."""
    if not measurements:
        raise ValueError("residual_objective needs at least one measurement")
    return math.fsum(
        (m.rss_dbm - expected_rss(m.uav_pos, candidate, params, d_min)) ** 2
        for m in measurements
    )


def argmin_first(values: np.ndarray) -> int:
    """Lowest flat index among entries tied (within TIE_RTOL) with the minimum."""
    flat = values.ravel()
    lo = flat.min()
    tol = TIE_RTOL * max(1.0, abs(lo))
    return int(np.flatnonzero(flat <= lo + tol)[0])


class GridLikelihood:
    """Running least-squares objective over a fixed grid.

    Each measurement adds its squared residual surface, so after adding every
    measurement up to epoch t the surface equals the from-scratch objective.
    """

    def __init__(self, grid: GridSpec, params: ChannelParams, d_min: float):
        self.grid = grid
        self.params = params
        self.d_min = d_min
        self._xs, self._ys = grid.axes()
        self.objective = np.zeros(grid.shape)
        self.count = 0

    def add(self, m: Measurement) -> None:
        r = expected_rss_grid((m.uav_pos.x, m.uav_pos.y), self._xs, self._ys,
                              self.params, self.d_min)
        np.subtract(m.rss_dbm, r, out=r)
        r *= r
        self.objective += r
        self.count += 1

    def extend(self, measurements: Iterable[Measurement]) -> None:
        for m in measurements:
            self.add(m)

    def estimate(self) -> Point2:
        if self.count == 0:
            raise ValueError("no measurements added")
        return self.grid.point(argmin_first(self.objective))


def mle_grid_search(measurements: Sequence[Measurement], grid: GridSpec, params: ChannelParams,
                    d_min: float) -> Point2:
    if not measurements:
        raise ValueError("mle_grid_search needs at least one measurement")
    lik = GridLikelihood(grid, params, d_min)
    lik.extend(measurements)
    return lik.estimate()
