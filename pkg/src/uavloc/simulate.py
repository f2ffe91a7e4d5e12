"""Epoch loop, Monte-Carlo aggregation and paired planner comparison."""

from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import Measurement, Point2, distance, noise_stream, sample_rss
from .config import ScenarioConfig
from .errors import NumericalError
from .estimator import GridLikelihood
from .fisher import FimMatrix, crlb, d_optimality, fim_accumulate, fim_epoch
from .planner import PlannerKind, PlannerState, candidate_position, plan_step

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    run_index: int
    estimates: list[Point2]
    errors_m: list[float]
    trajectories: list[list[Point2]]
    headings_deg: list[list[float]]
    measurements: list[Measurement]
    # Accumulated information evaluated at the true target; None when sigma_db == 0.
    true_fim: list[FimMatrix | None]
    crlb_trace_m2: list[float | None]

    @property
    def det_fim(self) -> list[float | None]:
        return [None if f is None else d_optimality(f) for f in self.true_fim]


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    rmse_m: float
    mean_det_fim: float | None
    mean_crlb_trace_m2: float | None


@dataclass
class Comparison:
    labels: list[str]
    metrics: dict[str, list[EpochMetrics]]

    def final_rmse(self) -> dict[str, float]:
        return {k: m[-1].rmse_m for k, m in self.metrics.items()}

    def rmse_columns(self) -> dict[str, list[float]]:
        return {k: [e.rmse_m for e in m] for k, m in self.metrics.items()}


def _planning_channel(cfg: ScenarioConfig):
    # Heading argmax is invariant to the FIM scale, so sigma = 0 plans with unit sigma.
    if cfg.channel.sigma_db == 0:
        return dataclasses.replace(cfg.channel, sigma_db=1.0)
    return cfg.channel


def _check_finite(*values: float) -> None:
    if not all(math.isfinite(v) for v in values):
        raise NumericalError(f"non-finite value in simulation: {values}")


def run_single(cfg: ScenarioConfig, run_index: int) -> RunResult:
    """Measure, estimate, plan and move for epochs 0..N; epoch N only measures and estimates."""
    plan_channel = _planning_channel(cfg)
    report_fim = cfg.channel.sigma_db > 0
    lik = GridLikelihood(cfg.grid, cfg.channel, cfg.d_min_m)
    positions = list(cfg.uav_starts)
    trajectories = [[p] for p in positions]
    history: list[list[Point2]] = []
    estimates, errors, measurements, headings = [], [], [], []
    true_fims, crlb_trace = [], []
    true_info = FimMatrix()
    last: tuple[float, ...] | None = None

    for t in range(cfg.horizon + 1):
        epoch_ms = [
            sample_rss(p, cfg.target, cfg.channel,
                       noise_stream(cfg.master_seed, run_index, m, t), cfg.d_min_m, m, t)
            for m, p in enumerate(positions)
        ]
        _check_finite(*(m.rss_dbm for m in epoch_ms))
        measurements.extend(epoch_ms)
        lik.extend(epoch_ms)
        r_hat = lik.estimate()
        estimates.append(r_hat)
        errors.append(distance(r_hat, cfg.target))
        history.append(list(positions))

        if report_fim:
            true_info = true_info + fim_epoch(positions, cfg.target, cfg.channel, cfg.d_min_m)
            true_fims.append(true_info)
            bound = crlb(true_info)
            crlb_trace.append(None if bound is None else float(np.trace(bound)))
        else:
            true_fims.append(None)
            crlb_trace.append(None)

        if t == cfg.horizon:
            break

        acc = fim_accumulate(fim_epoch(ps, r_hat, plan_channel, cfg.d_min_m) for ps in history)
        state = PlannerState(
            epoch=t, horizon=cfg.horizon, step_m=cfg.step_m,
            angle_step_deg=cfg.angle_step_deg, uav_positions=tuple(positions),
            accumulated_fim=acc, r_hat=r_hat, last_headings_deg=last,
        )
        chosen = plan_step(cfg.planner, state, plan_channel, cfg.d_min_m, cfg.heading_mode)
        positions = [candidate_position(p, a, 1, cfg.step_m) for p, a in zip(positions, chosen)]
        _check_finite(*(c for p in positions for c in (p.x, p.y)))
        for traj, p in zip(trajectories, positions):
            traj.append(p)
        headings.append(chosen)
        last = tuple(chosen)

    return RunResult(run_index, estimates, errors, trajectories, headings, measurements,
                     true_fims, crlb_trace)


def _run_one(args):
    cfg, i = args
    return run_single(cfg, i)


def simulate_runs(cfg: ScenarioConfig, workers: int | None = None) -> list[RunResult]:
    """All Monte-Carlo trials, returned in run-index order."""
    jobs = [(cfg, i) for i in range(cfg.runs)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs))
    out = []
    for job in jobs:
        out.append(_run_one(job))
        log.debug("%s %s run %d done", cfg.name, cfg.planner.label, job[1])
    return out


def _mean(values: Sequence[float]) -> float:
    # fsum is exactly rounded, hence independent of trial order
    return math.fsum(values) / len(values)


def aggregate(results: Sequence[RunResult]) -> list[EpochMetrics]:
    if not results:
        raise ValueError("no runs to aggregate")
    n_epochs = len(results[0].errors_m)
    metrics = []
    dets = [r.det_fim for r in results]
    for t in range(n_epochs):
        rmse = math.sqrt(_mean([r.errors_m[t] ** 2 for r in results]))
        det_t = [d[t] for d in dets if d[t] is not None]
        traces = [r.crlb_trace_m2[t] for r in results if r.crlb_trace_m2[t] is not None]
        metrics.append(EpochMetrics(
            epoch=t,
            rmse_m=rmse,
            mean_det_fim=_mean(det_t) if det_t else None,
            mean_crlb_trace_m2=_mean(traces) if traces else None,
        ))
    return metrics


def run_monte_carlo(cfg: ScenarioConfig, workers: int | None = None) -> list[EpochMetrics]:
    return aggregate(simulate_runs(cfg, workers))


def planner_labels(kinds: Sequence[PlannerKind]) -> list[str]:
    """Planner labels, suffixed ``#2``, ``#3`` ... when a kind repeats."""
    labels = []
    for kind in kinds:
        n = sum(1 for k in kinds[:len(labels)] if k == kind)
        labels.append(kind.label if n == 0 else f"{kind.label}#{n + 1}")
    return labels


def compare_planners(cfg: ScenarioConfig, kinds: Sequence[PlannerKind],
                     workers: int | None = None) -> Comparison:
    """Per-epoch RMSE of each planner on identical noise realizations.

    Noise streams are keyed by (seed, run, uav, epoch), never by planner
    choices, so every planner sees the same shadowing draws.
    """
    if len(kinds) < 2:
        raise ValueError("compare_planners needs at least two planner kinds")
    labels = planner_labels(kinds)
    metrics = {label: run_monte_carlo(cfg.replace(planner=kind), workers)
               for label, kind in zip(labels, kinds)}
    return Comparison(labels, metrics)


def heading_changes(result: RunResult) -> list[float]:
    """Mean absolute heading change (degrees) over UAVs, for each move after the first."""
    out = []
    for prev, cur in zip(result.headings_deg, result.headings_deg[1:]):
        diffs = [abs((c - p + 180.0) % 360.0 - 180.0) for p, c in zip(prev, cur)]
        out.append(sum(diffs) / len(diffs))
    return out
