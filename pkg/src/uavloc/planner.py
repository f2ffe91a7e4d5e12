"""D-optimal heading selection: greedy, predictive and hybrid planners.

Every planner scores a discrete grid of absolute headings by the determinant of
the information already gathered plus the information anticipated from moving
along the heading, and returns the smallest heading attaining the maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import ChannelParams, Point2, distance
from .errors import ConfigError
from .fisher import FimMatrix, fim_scale, geometry_terms

# Objective values within this relative band of the maximum count as ties.
ANGLE_TIE_RTOL = 1e-10

HEADING_MODES = ("per_uav", "shared")


@dataclass(frozen=True, slots=True)
class PlannerKind:
    variant: str
    switch_epoch: int | None = None

    def __post_init__(self):
        if self.variant not in ("greedy", "predictive", "hybrid"):
            raise ConfigError(f"unknown planner variant {self.variant!r}")
        if self.variant == "hybrid":
            if self.switch_epoch is None or self.switch_epoch < 0:
                raise ConfigError("hybrid planner needs a non-negative switch epoch")
        elif self.switch_epoch is not None:
            raise ConfigError(f"{self.variant} planner takes no switch epoch")

    @classmethod
    def greedy(cls) -> PlannerKind:
        return cls("greedy")

    @classmethod
    def predictive(cls) -> PlannerKind:
        return cls("predictive")

    @classmethod
    def hybrid(cls, switch_epoch: int = 10) -> PlannerKind:
        return cls("hybrid", switch_epoch)

    @classmethod
    def parse(cls, text: str) -> PlannerKind:
        """Parse ``greedy``, ``predictive``, ``hybrid`` or ``hybrid:K``."""
        name, _, arg = text.strip().lower().partition(":")
        if name == "hybrid":
            try:
                return cls.hybrid(int(arg) if arg else 10)
            except ValueError:
                raise ConfigError(f"bad hybrid switch epoch in {text!r}") from None
        if arg:
            raise ConfigError(f"planner {name!r} takes no argument")
        return cls(name)

    @property
    def label(self) -> str:
        return f"hybrid:{self.switch_epoch}" if self.variant == "hybrid" else self.variant

    def uses_greedy(self, epoch: int) -> bool:
        if self.variant == "hybrid":
            return epoch < self.switch_epoch
        return self.variant == "greedy"


@dataclass(frozen=True)
class PlannerState:
    epoch: int
    horizon: int
    step_m: float
    angle_step_deg: float
    uav_positions: tuple[Point2, ...]
    accumulated_fim: FimMatrix
    r_hat: Point2
    # Heading each UAV flew last epoch; None before the first move.
    last_headings_deg: tuple[float | None, ...] | None = field(default=None)

    def __post_init__(self):
        if not self.step_m > 0:
            raise ConfigError("step length must be positive")
        if not 0 < self.angle_step_deg <= 360:
            raise ConfigError("angle step must lie in (0, 360]")
        if not 0 <= self.epoch < self.horizon:
            raise ConfigError(f"epoch {self.epoch} outside [0, {self.horizon})")
        if not self.uav_positions:
            raise ConfigError("planner state needs at least one UAV")

    @property
    def remaining(self) -> int:
        return self.horizon - self.epoch


def angle_grid(angle_step_deg: float) -> np.ndarray:
    n = math.ceil(360.0 / angle_step_deg - 1e-9)
    return angle_step_deg * np.arange(n)


def unit(alpha_deg):
    a = np.deg2rad(alpha_deg)
    return np.cos(a), np.sin(a)


def candidate_position(pos: Point2, alpha_deg: float, k: int, step_m: float) -> Point2:
    if k < 1:
        raise ValueError("k must be >= 1")
    c, s = unit(alpha_deg)
    return Point2(pos.x + k * step_m * float(c), pos.y + k * step_m * float(s))


def bearing_deg(src: Point2, dst: Point2) -> float:
    """Heading from ``src`` toward ``dst`` in [0, 360); 0 when they coincide."""
    if distance(src, dst) == 0:
        return 0.0
    return math.degrees(math.atan2(dst.y - src.y, dst.x - src.x)) % 360.0


def pick_heading(angles: np.ndarray, objective: np.ndarray) -> float:
    best = objective.max()
    tol = ANGLE_TIE_RTOL * abs(best)
    return float(angles[np.flatnonzero(objective >= best - tol)[0]])


def _det(xx, xy, yy):
    return xx * yy - xy * xy


def greedy_objective(state: PlannerState, uav_index: int, peers_next: Sequence[Point2],
                     params: ChannelParams, d_min: float) -> tuple[np.ndarray, np.ndarray]:
    """Heading grid and the one-step D-optimality score for each heading."""
    k = fim_scale(params)
    r = state.r_hat
    acc = state.accumulated_fim
    bxx, bxy, byy = acc.j_xx, acc.j_xy, acc.j_yy
    if peers_next:
        txx, txy, tyy = geometry_terms([p.x for p in peers_next], [p.y for p in peers_next],
                                       r.x, r.y, d_min)
        bxx, bxy, byy = bxx + k * txx.sum(), bxy + k * txy.sum(), byy + k * tyy.sum()
    angles = angle_grid(state.angle_step_deg)
    c, s = unit(angles)
    pos = state.uav_positions[uav_index]
    cxx, cxy, cyy = geometry_terms(pos.x + state.step_m * c, pos.y + state.step_m * s,
                                   r.x, r.y, d_min)
    return angles, _det(bxx + k * cxx, bxy + k * cxy, byy + k * cyy)


def greedy_direction(state: PlannerState, uav_index: int, peers_next: Sequence[Point2],
                     params: ChannelParams, d_min: float) -> float:
    """Heading maximizing det(J_{t+1}(heading) + accumulated FIM).

    ``peers_next`` are the positions the other UAVs are assumed to occupy at t+1.
    """
    angles, obj = greedy_objective(state, uav_index, peers_next, params, d_min)
    return pick_heading(angles, obj)


def _peer_path_terms(starts: Sequence[Point2], headings: Sequence[float], steps: np.ndarray,
                     step_m: float, r: Point2, d_min: float):
    if not starts:
        return 0.0, 0.0, 0.0
    sx = np.array([p.x for p in starts])
    sy = np.array([p.y for p in starts])
    c, s = unit(np.asarray(headings, dtype=float))
    px = sx[None, :] + steps[:, None] * step_m * c[None, :]
    py = sy[None, :] + steps[:, None] * step_m * s[None, :]
    txx, txy, tyy = geometry_terms(px, py, r.x, r.y, d_min)
    return txx.sum(), txy.sum(), tyy.sum()


def predictive_objective(state: PlannerState, uav_index: int, peer_starts: Sequence[Point2],
                         peer_headings: Sequence[float], params: ChannelParams,
                         d_min: float) -> tuple[np.ndarray, np.ndarray]:
    if state.remaining < 1:
        raise ValueError("no remaining epochs to plan for")
    k = fim_scale(params)
    r = state.r_hat
    steps = np.arange(1, state.remaining + 1, dtype=float)
    acc = state.accumulated_fim
    pxx, pxy, pyy = _peer_path_terms(peer_starts, peer_headings, steps, state.step_m, r, d_min)
    bxx, bxy, byy = acc.j_xx + k * pxx, acc.j_xy + k * pxy, acc.j_yy + k * pyy

    angles = angle_grid(state.angle_step_deg)
    c, s = unit(angles)
    pos = state.uav_positions[uav_index]
    # shape (R, A): UAV k steps along each heading
    cx = pos.x + steps[:, None] * state.step_m * c[None, :]
    cy = pos.y + steps[:, None] * state.step_m * s[None, :]
    cxx, cxy, cyy = geometry_terms(cx, cy, r.x, r.y, d_min)
    return angles, _det(bxx + k * cxx.sum(axis=0), bxy + k * cxy.sum(axis=0),
                        byy + k * cyy.sum(axis=0))


def predictive_direction(state: PlannerState, uav_index: int, peer_starts: Sequence[Point2],
                         peer_headings: Sequence[float], params: ChannelParams,
                         d_min: float) -> float:
    """Heading maximizing det of the FIM accumulated along a straight flight to the horizon.

    Peer ``j`` is anticipated at ``peer_starts[j]`` advanced ``k`` steps along
    ``peer_headings[j]`` for k = 1..N-t.
    """
    angles, obj = predictive_objective(state, uav_index, peer_starts, peer_headings,
                                       params, d_min)
    return pick_heading(angles, obj)


def _shared_objective(state: PlannerState, steps: np.ndarray, params: ChannelParams,
                      d_min: float) -> tuple[np.ndarray, np.ndarray]:
    k = fim_scale(params)
    r = state.r_hat
    acc = state.accumulated_fim
    angles = angle_grid(state.angle_step_deg)
    c, s = unit(angles)
    sx = np.array([p.x for p in state.uav_positions])
    sy = np.array([p.y for p in state.uav_positions])
    # shape (R, M, A)
    off = steps[:, None, None] * state.step_m
    px = sx[None, :, None] + off * c[None, None, :]
    py = sy[None, :, None] + off * s[None, None, :]
    txx, txy, tyy = geometry_terms(px, py, r.x, r.y, d_min)
    return angles, _det(acc.j_xx + k * txx.sum(axis=(0, 1)), acc.j_xy + k * txy.sum(axis=(0, 1)),
                        acc.j_yy + k * tyy.sum(axis=(0, 1)))


def plan_step(kind: PlannerKind, state: PlannerState, params: ChannelParams, d_min: float,
              heading_mode: str = "per_uav") -> list[float]:
    """One heading per UAV for the move from epoch t to t+1.

    In ``per_uav`` mode headings are chosen by coordinate ascent in index
    order: UAV m sees the committed moves of UAVs < m. Under greedy the later
    UAVs are held at their current positions; under predictive they continue
    along their last heading (toward ``r_hat`` before the first move).
    ``shared`` mode flies every UAV along one common heading.
    """
    greedy = kind.uses_greedy(state.epoch)
    positions = state.uav_positions
    n_uav = len(positions)

    if heading_mode == "shared":
        steps = np.arange(1, (1 if greedy else state.remaining) + 1, dtype=float)
        angles, obj = _shared_objective(state, steps, params, d_min)
        return [pick_heading(angles, obj)] * n_uav
    if heading_mode != "per_uav":
        raise ConfigError(f"unknown heading mode {heading_mode!r}")

    last = state.last_headings_deg or (None,) * n_uav
    headings: list[float | None] = [
        bearing_deg(p, state.r_hat) if h is None else h for p, h in zip(positions, last)
    ]
    chosen: list[float] = []
    for m in range(n_uav):
        if greedy:
            peers = [candidate_position(positions[j], chosen[j], 1, state.step_m)
                     for j in range(m)]
            peers += [positions[j] for j in range(m + 1, n_uav)]
            alpha = greedy_direction(state, m, peers, params, d_min)
        else:
            others = [j for j in range(n_uav) if j != m]
            peer_h = [chosen[j] if j < m else headings[j] for j in others]
            alpha = predictive_direction(state, m, [positions[j] for j in others], peer_h,
                                         params, d_min)
        chosen.append(alpha)
    return chosen


def reach_ability(config) -> float:
    """Total travel length over the mean initial UAV-target distance."""
    if config.horizon == 0:
        return 0.0
    mean_d = sum(distance(p, config.target) for p in config.uav_starts) / len(config.uav_starts)
    return config.horizon * config.step_m / mean_d
