"""Fisher information for RSS localization, its accumulation, and the CRLB."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .channel import ChannelParams, Point2
from .errors import ConfigError

SINGULAR_DET = 1e-15


@dataclass(frozen=True, slots=True)
class FimMatrix:
    """Symmetric 2x2 Fisher information matrix, stored by its three free entries."""

    j_xx: float = 0.0
    j_xy: float = 0.0
    j_yy: float = 0.0

    def __add__(self, other: FimMatrix) -> FimMatrix:
        return FimMatrix(self.j_xx + other.j_xx, self.j_xy + other.j_xy, self.j_yy + other.j_yy)

    def scaled(self, c: float) -> FimMatrix:
        return FimMatrix(c * self.j_xx, c * self.j_xy, c * self.j_yy)

    def as_array(self) -> np.ndarray:
        return np.array([[self.j_xx, self.j_xy], [self.j_xy, self.j_yy]])

    def is_psd(self) -> bool:
        eps = 1e-12 * abs(self.j_xx * self.j_yy)
        return (self.j_xx >= 0 and self.j_yy >= 0
                and self.j_xx * self.j_yy - self.j_xy ** 2 >= -eps)


def fim_scale(params: ChannelParams) -> float:
    """Leading constant of the RSS FIM, (10 beta / ln 10) / sigma_dB.

    The factor is deliberately not squared; D-optimal headings do not depend on it.
    """
    if params.sigma_db == 0:
        raise ConfigError("FIM is undefined for sigma_db = 0; use a small positive sigma")
    return (10.0 * params.beta / math.log(10.0)) / params.sigma_db


def geometry_terms(px, py, rx, ry, d_min: float):
    """Per-position (dx^2, dx*dy, dy^2) / d^4 terms, broadcasting over arrays."""
    dx = np.asarray(px, dtype=float) - rx
    dy = np.asarray(py, dtype=float) - ry
    d2 = np.maximum(dx * dx + dy * dy, d_min * d_min)
    inv_d4 = 1.0 / (d2 * d2)
    return dx * dx * inv_d4, dx * dy * inv_d4, dy * dy * inv_d4


def fim_epoch(uav_positions: Sequence[Point2], r_hat: Point2, params: ChannelParams,
              d_min: float) -> FimMatrix:
    """FIM contributed by one measurement from each UAV position, evaluated at ``r_hat``."""
    if len(uav_positions) == 0:
        raise ConfigError("fim_epoch needs at least one UAV position")
    k = fim_scale(params)
    px = [p.x for p in uav_positions]
    py = [p.y for p in uav_positions]
    txx, txy, tyy = geometry_terms(px, py, r_hat.x, r_hat.y, d_min)
    return FimMatrix(k * math.fsum(txx), k * math.fsum(txy), k * math.fsum(tyy))


def fim_accumulate(history: Iterable[FimMatrix]) -> FimMatrix:
    xx, xy, yy = [], [], []
    for f in history:
        xx.append(f.j_xx)
        xy.append(f.j_xy)
        yy.append(f.j_yy)
    return FimMatrix(math.fsum(xx), math.fsum(xy), math.fsum(yy))


def d_optimality(fim: FimMatrix) -> float:
    return fim.j_xx * fim.j_yy - fim.j_xy * fim.j_xy


def crlb(fim: FimMatrix) -> np.ndarray | None:
    """Inverse FIM, or ``None`` when the geometry is unobservable (det <= 1e-15)."""
    det = d_optimality(fim)
    if not det > SINGULAR_DET:
        return None
    return np.array([[fim.j_yy, -fim.j_xy], [-fim.j_xy, fim.j_xx]]) / det
