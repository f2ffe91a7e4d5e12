"""Command-line entry point: ``uavloc run|compare|sweep|presets``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io
from .config import PRESETS, ScenarioConfig, resolve_scenario, sigma_preset, to_dict
from .errors import ConfigError, NumericalError
from .planner import PlannerKind, reach_ability
from .simulate import Comparison, aggregate, planner_labels, simulate_runs

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _scenario(args) -> ScenarioConfig:
    cfg = resolve_scenario(args.scenario)
    changes = {}
    if args.runs is not None:
        changes["runs"] = args.runs
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.heading_mode is not None:
        changes["heading_mode"] = args.heading_mode
    planners = getattr(args, "planner", None)
    if isinstance(planners, str):
        changes["planner"] = PlannerKind.parse(planners)
    return cfg.replace(**changes) if changes else cfg


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _comments(cfg: ScenarioConfig) -> list[str]:
    return [f"scenario={cfg.name} planner={cfg.planner.label} runs={cfg.runs} "
            f"seed={cfg.master_seed} sigma_db={cfg.channel.sigma_db}"]


def _run_and_write(cfg: ScenarioConfig, out: Path, stem: str, args) -> list:
    results = simulate_runs(cfg, args.workers)
    metrics = aggregate(results)
    io.write_metrics_csv(out / f"{stem}.csv", metrics, _comments(cfg))
    if args.trajectories:
        io.write_trajectories(out / f"{stem}.jsonl", results)
    return metrics


def cmd_run(args) -> None:
    cfg = _scenario(args)
    out = _out_dir(args)
    stem = f"metrics_{cfg.planner.label.replace(':', '')}"
    metrics = _run_and_write(cfg, out, stem, args)
    print(f"{cfg.name} {cfg.planner.label}: final RMSE {metrics[-1].rmse_m:.2f} m "
          f"over {cfg.runs} runs -> {out / (stem + '.csv')}")


def cmd_compare(args) -> None:
    cfg = _scenario(args)
    kinds = [PlannerKind.parse(p) for p in (args.planner or ["greedy", "predictive", "hybrid:10"])]
    if len(kinds) < 2:
        raise ConfigError("compare needs at least two --planner values")
    out = _out_dir(args)
    labels = planner_labels(kinds)
    metrics = {}
    for label, kind in zip(labels, kinds):
        metrics[label] = _run_and_write(cfg.replace(planner=kind), out,
                                        f"metrics_{label.replace(':', '')}", args)
    comp = Comparison(labels, metrics)
    io.write_comparison_csv(out / "compare.csv", comp, _comments(cfg))
    io.write_summary_csv(out / "summary.csv", "planner", comp.final_rmse())
    for label, v in comp.final_rmse().items():
        print(f"{label:>12s}  final RMSE {v:8.2f} m")


def _sweep_value(param: str, text: str):
    if param == "sigma_db":
        try:
            return float(text)
        except ValueError:
            return sigma_preset(text)
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"switch_epoch values must be integers, got {text!r}") from None


def cmd_sweep(args) -> None:
    cfg = _scenario(args)
    out = _out_dir(args)
    finals = {}
    for text in args.values.split(","):
        value = _sweep_value(args.param, text.strip())
        if args.param == "sigma_db":
            c = cfg.with_sigma(value)
        else:
            c = cfg.replace(planner=PlannerKind.hybrid(value))
        metrics = _run_and_write(c, out, f"metrics_{args.param}_{value}", args)
        finals[value] = metrics[-1].rmse_m
        print(f"{args.param}={value}: final RMSE {finals[value]:.2f} m")
    io.write_summary_csv(out / "sweep.csv", args.param, finals)


def cmd_presets(args) -> None:
    for name in PRESETS:
        cfg = resolve_scenario(name)
        d = to_dict(cfg)
        print(f"{name:18s} uavs={cfg.n_uav} sigma_db={d['sigma_db']} N={cfg.horizon} "
              f"l={cfg.step_m} runs={cfg.runs} reach={reach_ability(cfg):.3f}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uavloc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, multi_planner=False):
        sp.add_argument("--scenario", required=True, help="preset name or scenario YAML file")
        if multi_planner:
            sp.add_argument("--planner", action="append",
                            help="greedy | predictive | hybrid:K (repeat for each planner)")
        else:
            sp.add_argument("--planner", help="greedy | predictive | hybrid:K")
        sp.add_argument("--runs", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--heading-mode", choices=("per_uav", "shared"))
        sp.add_argument("--out", default="out")
        sp.add_argument("--trajectories", action="store_true", help="dump per-run JSON-lines")
        sp.add_argument("--workers", type=int, default=None)

    common(sub.add_parser("run", help="run one scenario"))
    common(sub.add_parser("compare", help="paired-seed comparison of planners"),
           multi_planner=True)
    sw = sub.add_parser("sweep", help="vary sigma_db or the hybrid switch epoch")
    common(sw)
    sw.add_argument("--param", choices=("sigma_db", "switch_epoch"), required=True)
    sw.add_argument("--values", required=True, help="comma-separated list")
    sub.add_parser("presets", help="list bundled scenarios")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": cmd_run, "compare": cmd_compare, "sweep": cmd_sweep,
               "presets": cmd_presets}[args.command]
    try:
        handler(args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
