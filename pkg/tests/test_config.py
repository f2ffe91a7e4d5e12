import math

import pytest
import yaml

from uavloc.channel import Point2
from uavloc.config import (PRESETS, ScenarioConfig, dump_scenario, from_dict, load_scenario,
                           preset, resolve_scenario, sigma_preset, to_dict)
from uavloc.errors import ConfigError
from uavloc.planner import PlannerKind


def test_single_presets():
    opt, real = preset("single_optimistic"), preset("single_realistic")
    assert opt.channel.sigma_db == 0.01 and real.channel.sigma_db == 6.0
    assert opt.horizon == real.horizon == 15
    assert opt.uav_starts == (Point2(0, 100),)
    assert opt.target == Point2(0, 0)
    assert opt.grid.shape == (301, 301)
    assert opt.grid.contains(opt.target)


def test_four_uav_presets():
    fav, real = preset("favorable_4uav"), preset("realistic_4uav")
    assert fav.horizon == real.horizon == 27
    assert fav.channel.sigma_db == real.channel.sigma_db == 6.0
    assert set(fav.uav_starts) == {Point2(100, 100), Point2(-100, 100),
                                   Point2(-100, -100), Point2(100, -100)}
    assert real.uav_starts == (Point2(-100, -100),) * 4
    assert (real.grid.x_min, real.grid.x_max) == (-150, 150)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        preset("nope")
    with pytest.raises(ConfigError):
        resolve_scenario("not_a_preset_or_file")


def test_sigma_presets():
    assert sigma_preset("urban_micro") == 3.0
    assert sigma_preset("suburban_macro") == 6.0
    with pytest.raises(ConfigError):
        sigma_preset("lunar")


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_yaml_round_trip(tmp_path, name):
    cfg = preset(name).replace(planner=PlannerKind.hybrid(7), master_seed=11, runs=3)
    path = tmp_path / "s.yaml"
    dump_scenario(cfg, path)
    assert load_scenario(path) == cfg
    assert resolve_scenario(str(path)) == cfg


def test_minimal_document_uses_defaults():
    doc = {"format_version": 1, "sigma_db": 6, "uav_starts": [[0, 100]], "target": [0, 0],
           "grid_x_min": -150, "grid_x_max": 150, "grid_y_min": -50, "grid_y_max": 250}
    cfg = from_dict(doc)
    assert cfg.step_m == 5.0 and cfg.horizon == 15 and cfg.planner == PlannerKind.greedy()
    assert cfg.channel.beta == 3.0


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(format_version=2),
    lambda d: d.pop("format_version"),
    lambda d: d.update(colour="blue"),
    lambda d: d.pop("sigma_db"),
    lambda d: d.update(target=[500, 500]),
    lambda d: d.update(planner="hybrid:99"),
    lambda d: d.update(uav_starts=[[1, 2, 3]]),
    lambda d: d.update(beta=-1),
    lambda d: d.update(runs=0),
    lambda d: d.update(heading_mode="diagonal"),
    lambda d: d.update(sigma_db=float("nan")),
])
def test_bad_documents(mutate):
    d = to_dict(preset("realistic_4uav"))
    mutate(d)
    with pytest.raises(ConfigError):
        from_dict(d)


def test_unparseable_yaml(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("format_version: [1\n")
    with pytest.raises(ConfigError):
        load_scenario(p)
    p.write_text(yaml.safe_dump([1, 2]))
    with pytest.raises(ConfigError):
        load_scenario(p)


def test_with_sigma_keeps_everything_else():
    cfg = preset("realistic_4uav")
    c2 = cfg.with_sigma(3.0)
    assert c2.channel.sigma_db == 3.0
    assert c2.replace(channel=cfg.channel) == cfg
    assert math.isclose(c2.channel.beta, cfg.channel.beta)


def test_direct_validation():
    base = preset("single_realistic")
    for bad in (dict(step_m=0), dict(horizon=0), dict(uav_starts=()), dict(master_seed=-1),
                dict(angle_step_deg=0), dict(d_min_m=0)):
        with pytest.raises(ConfigError):
            base.replace(**bad)
    assert isinstance(base, ScenarioConfig)
