"""Scenario configuration, bundled presets, and the YAML scenario file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .channel import ITU_SIGMA_DB, ChannelParams, Point2
from .errors import ConfigError
from .estimator import GridSpec
from .planner import HEADING_MODES, PlannerKind

FORMAT_VERSION = 1

# Half-width of the 300 m x 300 m search square.
GRID_HALF_WIDTH = 150.0


@dataclass(frozen=True)
class ScenarioConfig:
    channel: ChannelParams
    uav_starts: tuple[Point2, ...]
    target: Point2
    grid: GridSpec
    step_m: float = 5.0
    horizon: int = 15
    planner: PlannerKind = field(default_factory=PlannerKind.greedy)
    angle_step_deg: float = 5.0
    d_min_m: float = 1.0
    runs: int = 100
    master_seed: int = 0
    heading_mode: str = "per_uav"
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "uav_starts", tuple(self.uav_starts))
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if not self.uav_starts:
            raise ConfigError("at least one UAV start is required")
        if not self.grid.contains(self.target):
            raise ConfigError(f"target {self.target} lies outside the search grid")
        if not self.step_m > 0:
            raise ConfigError("step_m must be positive")
        if not 0 < self.angle_step_deg <= 360:
            raise ConfigError("angle_step_deg must lie in (0, 360]")
        if not self.d_min_m > 0:
            raise ConfigError("d_min_m must be positive")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")
        if self.heading_mode not in HEADING_MODES:
            raise ConfigError(f"heading_mode must be one of {HEADING_MODES}")
        if self.planner.variant == "hybrid" and self.planner.switch_epoch > self.horizon:
            raise ConfigError("hybrid switch epoch exceeds the horizon")

    @property
    def n_uav(self) -> int:
        return len(self.uav_starts)

    def replace(self, **changes) -> ScenarioConfig:
        return dataclasses.replace(self, **changes)

    def with_sigma(self, sigma_db: float) -> ScenarioConfig:
        return self.replace(channel=dataclasses.replace(self.channel, sigma_db=sigma_db))


def _single(sigma_db: float, name: str) -> ScenarioConfig:
    starts = (Point2(0.0, 100.0),)
    return ScenarioConfig(
        channel=ChannelParams(p0_dbm=10.0, beta=3.0, d0_m=1.0, sigma_db=sigma_db),
        uav_starts=starts,
        target=Point2(0.0, 0.0),
        grid=GridSpec.centered(_midpoint(starts), GRID_HALF_WIDTH, 1.0),
        step_m=5.0,
        horizon=15,
        name=name,
    )


def _midpoint(points) -> Point2:
    return Point2(sum(p.x for p in points) / len(points), sum(p.y for p in points) / len(points))


def _four(starts, name: str) -> ScenarioConfig:
    return ScenarioConfig(
        channel=ChannelParams(p0_dbm=10.0, beta=3.0, d0_m=1.0, sigma_db=6.0),
        uav_starts=tuple(starts),
        target=Point2(0.0, 0.0),
        grid=GridSpec(-GRID_HALF_WIDTH, GRID_HALF_WIDTH, -GRID_HALF_WIDTH, GRID_HALF_WIDTH, 1.0),
        step_m=5.0,
        horizon=27,
        name=name,
    )


PRESETS = {
    "single_optimistic": lambda: _single(0.01, "single_optimistic"),
    "single_realistic": lambda: _single(6.0, "single_realistic"),
    "favorable_4uav": lambda: _four(
        [Point2(100.0, 100.0), Point2(-100.0, 100.0), Point2(-100.0, -100.0), Point2(100.0, -100.0)],
        "favorable_4uav"),
    "realistic_4uav": lambda: _four([Point2(-100.0, -100.0)] * 4, "realistic_4uav"),
}


def preset(name: str) -> ScenarioConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def sigma_preset(name: str) -> float:
    """Named ITU-R shadowing level in dB, e.g. ``suburban_macro``."""
    try:
        return ITU_SIGMA_DB[name]
    except KeyError:
        raise ConfigError(f"unknown ITU-R sigma preset {name!r}") from None


def to_dict(cfg: ScenarioConfig) -> dict:
    g, c = cfg.grid, cfg.channel
    return {
        "format_version": FORMAT_VERSION,
        "name": cfg.name,
        "p0_dbm": c.p0_dbm,
        "beta": c.beta,
        "d0_m": c.d0_m,
        "sigma_db": c.sigma_db,
        "uav_starts": [[p.x, p.y] for p in cfg.uav_starts],
        "target": [cfg.target.x, cfg.target.y],
        "step_m": cfg.step_m,
        "horizon": cfg.horizon,
        "planner": cfg.planner.label,
        "grid_x_min": g.x_min,
        "grid_x_max": g.x_max,
        "grid_y_min": g.y_min,
        "grid_y_max": g.y_max,
        "grid_resolution": g.resolution,
        "angle_step_deg": cfg.angle_step_deg,
        "d_min_m": cfg.d_min_m,
        "runs": cfg.runs,
        "master_seed": cfg.master_seed,
        "heading_mode": cfg.heading_mode,
    }


_KEYS = set(to_dict(preset("single_realistic")))


def _pt(v) -> Point2:
    x, y = v
    return Point2(float(x), float(y))


def from_dict(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("scenario document must be a mapping")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ConfigError(f"unsupported scenario format_version {version!r}")
    unknown = set(data) - _KEYS
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    base = {}
    try:
        for key in ("step_m", "angle_step_deg", "d_min_m"):
            if key in data:
                base[key] = float(data[key])
        for key in ("horizon", "runs", "master_seed"):
            if key in data:
                base[key] = int(data[key])
        for key in ("heading_mode", "name"):
            if key in data:
                base[key] = str(data[key])
        if "planner" in data:
            base["planner"] = PlannerKind.parse(str(data["planner"]))
        channel = ChannelParams(
            p0_dbm=float(data.get("p0_dbm", 10.0)),
            beta=float(data.get("beta", 3.0)),
            d0_m=float(data.get("d0_m", 1.0)),
            sigma_db=float(data["sigma_db"]),
        )
        grid = GridSpec(float(data["grid_x_min"]), float(data["grid_x_max"]),
                        float(data["grid_y_min"]), float(data["grid_y_max"]),
                        float(data.get("grid_resolution", 1.0)))
        return ScenarioConfig(
            channel=channel,
            uav_starts=tuple(_pt(v) for v in data["uav_starts"]),
            target=_pt(data["target"]),
            grid=grid,
            **base,
        )
    except KeyError as e:
        raise ConfigError(f"missing scenario key {e.args[0]!r}") from None
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"malformed scenario value: {e}") from None


def dump_scenario(cfg: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(yaml.safe_dump(to_dict(cfg), sort_keys=False, default_flow_style=None))


def load_scenario(path: str | Path) -> ScenarioConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse scenario file {path}: {e}") from None
    return from_dict(data)


def resolve_scenario(spec: str) -> ScenarioConfig:
    """Preset name or path to a scenario file."""
    if spec in PRESETS:
        return preset(spec)
    path = Path(spec)
    if not path.is_file():
        raise ConfigError(f"{spec!r} is neither a preset name nor a scenario file")
    return load_scenario(path)
