"""Filling scheme unit tests."""

import math

import numpy as np
import pytest

from walkpatterns import (
    PatternError,
    build_filling_tables,
    ks_distance,
    sample_meander_paths,
    sample_via_filling,
)
from walkpatterns.filling import (
    bessel3_endpoint_cdf,
    comeander_endpoint_cdf,
    meander_endpoint_cdf,
    target_density_ratio,
)


def test_cdfs_are_distribution_functions():
    x = np.linspace(0, 8, 400)
    for cdf in (meander_endpoint_cdf, bessel3_endpoint_cdf, comeander_endpoint_cdf):
        f = cdf(x)
        assert f[0] == pytest.approx(0.0, abs=1e-12)
        assert f[-1] == pytest.approx(1.0, abs=1e-6)
        assert np.all(np.diff(f) >= -1e-12)


def test_density_ratios():
    x = np.array([0.5, 1.0, 2.0])
    assert target_density_ratio("meander", x) == pytest.approx([1, 1, 1])
    assert target_density_ratio("bessel3", x) == pytest.approx(
        math.sqrt(2 / math.pi) * x
    )
    assert target_density_ratio("comeander", x) == pytest.approx(
        math.sqrt(2 / math.pi) / x
    )
    with pytest.raises(PatternError):
        target_density_ratio("nope", x)


def test_tables_meander_trivial():
    tb = build_filling_tables("meander")
    assert tb.depth == 1
    assert tb.c[-1] == pytest.approx(0.0, abs=1e-12)
    assert np.all(tb.d0 == 0)


def test_tables_structure():
    for target in ("bessel3", "comeander"):
        tb = build_filling_tables(target, residual=0.02)
        assert np.all(np.diff(tb.c) < 0)  # continue mass strictly decreasing
        assert tb.c[-1] < 0.02
        stop = tb.stop_distribution()
        assert np.all(stop >= -1e-12)
        assert stop.sum() == pytest.approx(1 - tb.c[-1], abs=1e-12)
        # stage-0 mass balance: integral of surplus equals integral of deficit
        p = tb.grid * np.exp(-tb.grid**2 / 2)
        assert np.trapezoid(tb.g0 * p, tb.grid) == pytest.approx(
            float(tb.c[0]), abs=2e-3
        )


def test_meander_sampler_paths_are_meanders():
    rng = np.random.default_rng(1)
    paths, proposals = sample_meander_paths(51, 200, rng)
    assert paths.shape == (200, 51)
    assert proposals >= 200
    assert np.all(paths.min(axis=1) > 0)
    assert np.all(np.abs(np.diff(paths, axis=1)) == 1)
    assert np.all(np.abs(paths[:, 0]) == 1)


def test_meander_endpoint_law():
    res = sample_via_filling("meander", 201, 3000, seed=4)
    assert res.restarts == 0
    assert np.all(res.depths == 0)
    assert ks_distance(res.endpoints, "meander", m=201, seed=4) < 0.035


def test_filling_bessel3():
    tb = build_filling_tables("bessel3")
    res = sample_via_filling("bessel3", 101, 1500, seed=5, tables=tb)
    assert ks_distance(res.endpoints, "bessel3", m=101, seed=5) < 0.06
    # mean endpoint near 2*sqrt(2/pi)
    assert res.endpoints.mean() == pytest.approx(2 * math.sqrt(2 / math.pi), abs=0.1)
    assert res.depths.max() < tb.depth


def test_filling_mismatched_tables():
    tb = build_filling_tables("bessel3")
    with pytest.raises(PatternError):
        sample_via_filling("comeander", 101, 10, tables=tb)


def test_filling_deterministic():
    a = sample_via_filling("bessel3", 101, 300, seed=9)
    b = sample_via_filling("bessel3", 101, 300, seed=9)
    assert np.array_equal(a.endpoints, b.endpoints)
    assert np.array_equal(a.paths, b.paths)
    assert a.restarts == b.restarts


def test_ks_distance_sanity():
    rng = np.random.default_rng(2)
    rayleigh = np.sqrt(-2 * np.log(rng.random(4000)))
    assert ks_distance(rayleigh, "meander") < 0.03
    assert ks_distance(rayleigh, "comeander") > 0.1
