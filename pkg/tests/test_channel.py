import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uavloc.channel import (ChannelParams, Point2, distance, expected_rss, expected_rss_grid,
                            noise_stream, sample_rss)
from uavloc.errors import ConfigError

P = ChannelParams(p0_dbm=10.0, beta=3.0, d0_m=1.0, sigma_db=6.0)
ORIGIN = Point2(0.0, 0.0)


@pytest.mark.parametrize("a,b,d", [
    ((0, 100), (0, 0), 100.0),
    ((0, 0), (0, 0), 0.0),
    ((30, 40), (0, 0), 50.0),
])
def test_distance(a, b, d):
    assert distance(Point2(*a), Point2(*b)) == d


def test_expected_rss_values():
    assert expected_rss(Point2(0, 100), ORIGIN, P, 1.0) == -50.0
    assert expected_rss(Point2(1, 0), ORIGIN, P, 1.0) == P.p0_dbm
    # scalar evaluation of the model: 10 - 30*log10(50)
    oracle = 10.0 - 30.0 * math.log10(50.0)
    assert expected_rss(Point2(30, 40), ORIGIN, P, 1.0) == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(-40.969, abs=1e-3)


def test_expected_rss_clamped_below_d_min():
    assert expected_rss(ORIGIN, ORIGIN, P, 1.0) == P.p0_dbm
    assert expected_rss(Point2(0.2, 0), ORIGIN, P, 1.0) == P.p0_dbm


@given(st.floats(1.001, 1e4), st.floats(1e-3, 1e3))
def test_strictly_decreasing_in_distance(d, extra):
    near = expected_rss(Point2(d, 0), ORIGIN, P, 1.0)
    far = expected_rss(Point2(d + extra, 0), ORIGIN, P, 1.0)
    assert far < near


@given(st.sampled_from([0.5, 2.0, 10.0, 100.0, 1000.0]), st.floats(0.5, 8.0))
def test_reference_scaling(c, beta):
    p = ChannelParams(p0_dbm=-20.0, beta=beta, d0_m=2.0, sigma_db=1.0)
    got = expected_rss(Point2(c * p.d0_m, 0), ORIGIN, p, 1e-3)
    assert got == pytest.approx(p.p0_dbm - 10 * beta * math.log10(c), rel=1e-13, abs=1e-12)


def test_grid_version_matches_scalar():
    xs = np.linspace(-50, 50, 11)
    ys = np.linspace(-20, 80, 7)
    uav = Point2(3.5, -7.25)
    grid = expected_rss_grid((uav.x, uav.y), xs, ys, P, 1.0)
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            assert grid[iy, ix] == pytest.approx(expected_rss(uav, Point2(x, y), P, 1.0),
                                                 rel=1e-13)


def test_zero_noise_is_exact():
    p0 = ChannelParams(sigma_db=0.0)
    m = sample_rss(Point2(30, 40), ORIGIN, p0, noise_stream(1, 2, 3, 4), 1.0)
    assert m.rss_dbm == expected_rss(Point2(30, 40), ORIGIN, p0, 1.0)


def test_same_seed_same_draw():
    a = sample_rss(Point2(30, 40), ORIGIN, P, noise_stream(7, 0, 1, 2), 1.0, 1, 2)
    b = sample_rss(Point2(30, 40), ORIGIN, P, noise_stream(7, 0, 1, 2), 1.0, 1, 2)
    assert a == b
    c = sample_rss(Point2(30, 40), ORIGIN, P, noise_stream(7, 0, 1, 3), 1.0, 1, 3)
    assert c.rss_dbm != a.rss_dbm


def test_noise_statistics():
    uav = Point2(30, 40)
    mean = expected_rss(uav, ORIGIN, P, 1.0)
    n = 100_000
    res = np.array([sample_rss(uav, ORIGIN, P, noise_stream(3, 0, 0, t), 1.0).rss_dbm - mean
                    for t in range(n)])
    assert abs(res.mean()) < 0.1
    assert abs(res.std() / 6.0 - 1.0) < 0.02


@pytest.mark.parametrize("kw", [dict(beta=0), dict(d0_m=-1), dict(sigma_db=-0.1)])
def test_invalid_params(kw):
    with pytest.raises(ConfigError):
        ChannelParams(**kw)


def test_point_must_be_finite():
    with pytest.raises(ConfigError):
        Point2(math.nan, 0.0)
    with pytest.raises(ConfigError):
        noise_stream(-1, 0, 0, 0)
