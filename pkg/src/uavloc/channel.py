"""Log-distance path loss with log-normal shadowing.

All powers are in the dB domain. Noise is added in dB only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True, slots=True)
class Point2:
    """Planar position in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ConfigError(f"non-finite point ({self.x}, {self.y})")

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True, slots=True)
class ChannelParams:
    p0_dbm: float = 10.0
    beta: float = 3.0
    d0_m: float = 1.0
    sigma_db: float = 6.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ConfigError(f"path-loss exponent must be positive, got {self.beta}")
        if not self.d0_m > 0:
            raise ConfigError(f"reference distance must be positive, got {self.d0_m}")
        if not self.sigma_db >= 0:
            raise ConfigError(f"shadowing sigma must be non-negative, got {self.sigma_db}")


@dataclass(frozen=True, slots=True)
class Measurement:
    uav_id: int
    epoch: int
    rss_dbm: float
    uav_pos: Point2


# Upper bounds of the ITU-R LOS shadowing figures, in dB.
ITU_SIGMA_DB = {
    "urban_micro": 3.0,
    "urban_macro": 4.0,
    "suburban_macro": 6.0,
    "rural_macro": 6.0,
}


def distance(a: Point2, b: Point2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def expected_rss(uav: Point2, target: Point2, params: ChannelParams, d_min: float) -> float:
    """Noise-free received power in dBm, distance clamped below at ``d_min``."""
    d = max(distance(uav, target), d_min)
    return params.p0_dbm - 10.0 * params.beta * math.log10(d / params.d0_m)


def expected_rss_grid(uav_xy, xs: np.ndarray, ys: np.ndarray, params: ChannelParams,
                      d_min: float) -> np.ndarray:
    """Vectorized :func:`expected_rss` on the grid ``ys[:, None] x xs[None, :]``."""
    dx = xs - uav_xy[0]
    dy = ys - uav_xy[1]
    d2 = dy[:, None] * dy[:, None] + dx[None, :] * dx[None, :]
    np.maximum(d2, d_min * d_min, out=d2)
    # 10 beta log10(d / d0) == 5 beta log10(d^2 / d0^2)
    np.log10(d2 / (params.d0_m * params.d0_m), out=d2)
    d2 *= -5.0 * params.beta
    d2 += params.p0_dbm
    return d2


def noise_stream(master_seed: int, run_index: int, uav_id: int, epoch: int) -> np.random.Generator:
    """Independent generator for one (run, uav, epoch) measurement slot.

    Keying the stream on the slot instead of drawing sequentially keeps noise
    realizations identical across planners.
    """
    if min(master_seed, run_index, uav_id, epoch) < 0:
        raise ConfigError("seed components must be non-negative")
    return np.random.default_rng(np.random.SeedSequence([master_seed, run_index, uav_id, epoch]))


def sample_rss(uav: Point2, target: Point2, params: ChannelParams, rng: np.random.Generator,
               d_min: float, uav_id: int = 0, epoch: int = 0) -> Measurement:
    mean = expected_rss(uav, target, params, d_min)
    n = params.sigma_db * float(rng.standard_normal())
    return Measurement(uav_id=uav_id, epoch=epoch, rss_dbm=mean + n, uav_pos=uav)
