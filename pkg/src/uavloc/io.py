"""Metrics CSV and trajectory JSON-lines formats."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .simulate import Comparison, EpochMetrics, RunResult

METRICS_COLUMNS = ("epoch", "rmse_m", "mean_det_fim", "mean_crlb_trace_m2")

_HEADER_NOTES = (
    "epoch runs 0..N: N moves and N+1 estimates, epoch 0 is the estimate before any move",
    "empty field = undefined value (singular CRLB at every run, or sigma_db = 0)",
    "FIM metrics are evaluated at the true target with K = 10*beta/(sigma_db*ln 10)",
)


def _fmt(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def _parse(v: str) -> float | None:
    return None if v == "" else float(v)


def _write_comments(fh: TextIO, extra: Sequence[str]) -> None:
    for line in (*extra, *_HEADER_NOTES):
        fh.write(f"# {line}\n")


def _data_lines(fh: TextIO):
    return (line for line in fh if not line.startswith("#"))


def write_metrics_csv(path: str | Path, metrics: Sequence[EpochMetrics],
                      comments: Sequence[str] = ()) -> None:
    with open(path, "w", newline="") as fh:
        _write_comments(fh, comments)
        w = csv.writer(fh)
        w.writerow(METRICS_COLUMNS)
        for m in metrics:
            w.writerow([m.epoch, _fmt(m.rmse_m), _fmt(m.mean_det_fim), _fmt(m.mean_crlb_trace_m2)])


def read_metrics_csv(path: str | Path) -> list[EpochMetrics]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(_data_lines(fh)))
    return [
        EpochMetrics(
            epoch=int(r["epoch"]),
            rmse_m=float(r["rmse_m"]),
            mean_det_fim=_parse(r["mean_det_fim"]),
            mean_crlb_trace_m2=_parse(r["mean_crlb_trace_m2"]),
        )
        for r in rows
    ]


def write_comparison_csv(path: str | Path, comp: Comparison, comments: Sequence[str] = ()) -> None:
    """Wide table: one RMSE column per planner label."""
    cols = comp.rmse_columns()
    n = len(next(iter(cols.values())))
    with open(path, "w", newline="") as fh:
        _write_comments(fh, [*comments, "columns after epoch hold rmse_m per planner"])
        w = csv.writer(fh)
        w.writerow(["epoch", *comp.labels])
        for t in range(n):
            w.writerow([t, *(_fmt(cols[k][t]) for k in comp.labels)])


def read_comparison_csv(path: str | Path) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(_data_lines(fh)))
    labels = [k for k in rows[0] if k != "epoch"] if rows else []
    return {k: [float(r[k]) for r in rows] for k in labels}


def write_summary_csv(path: str | Path, key: str, values: dict) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([key, "final_rmse_m"])
        for k, v in values.items():
            w.writerow([k, _fmt(v)])


def run_record(r: RunResult) -> dict:
    n_uav = len(r.trajectories)
    epochs = []
    for t, (est, err) in enumerate(zip(r.estimates, r.errors_m)):
        epochs.append({
            "epoch": t,
            "uav_positions": [[tr[t].x, tr[t].y] for tr in r.trajectories],
            "rss_dbm": [m.rss_dbm for m in r.measurements[t * n_uav:(t + 1) * n_uav]],
            "r_hat": [est.x, est.y],
            "error_m": err,
        })
    return {"run_index": r.run_index, "headings_deg": r.headings_deg, "epochs": epochs}


def write_trajectories(path: str | Path, results: Iterable[RunResult]) -> None:
    with open(path, "w") as fh:
        for r in results:
            fh.write(json.dumps(run_record(r)) + "\n")


def read_trajectories(path: str | Path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]
