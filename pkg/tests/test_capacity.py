"""Capacity and hitting-probability unit tests."""

import numpy as np
import pytest

from walkpatterns import (
    Kind,
    PatternClass,
    PatternError,
    alpha_potential,
    capacity_of,
    custom_collection,
    enumerate_class,
    hit_before_geometric,
    hitting_probability_exact,
    minimize_energy,
    sandwich,
)
from walkpatterns.capacity import minimize_energy_projected


def test_kernel_hand_values():
    coll = custom_collection(["++"])
    g = alpha_potential(coll, 0.5)
    # 1 + 1/4 + (1/4)^2 / (1/2)
    assert g[0, 0] == pytest.approx(1.375)

    coll2 = custom_collection(["+-", "-+"])
    g2 = alpha_potential(coll2, 0.5)
    i = [p.to_string() for p in coll2.paths].index("+-")
    j = [p.to_string() for p in coll2.paths].index("-+")
    # suffix_1('+-') = '-' = prefix_1('-+'): k=1 term 1/4; tail 1/8
    assert g2[i, j] == pytest.approx(0.375)


def test_kernel_tail_only():
    coll = custom_collection(["+++", "---"])
    g = alpha_potential(coll, 0.5)
    tail = 0.25**3 / 0.5
    i = [p.to_string() for p in coll.paths].index("+++")
    j = 1 - i
    # no suffix of +++ matches any prefix of ---: refresh tail only
    assert g[i, j] == pytest.approx(tail)
    assert np.all(g >= tail - 1e-15)


def test_kernel_alpha_zero_limit():
    coll = enumerate_class(PatternClass(Kind.POSITIVE, 5))
    g = alpha_potential(coll, 1e-6)
    assert np.allclose(g, np.eye(len(coll)), atol=1e-5)


def test_singleton_capacity():
    coll = custom_collection(["++"])
    res = capacity_of(coll, 0.5)
    assert res.capacity == pytest.approx(1 / 1.375, rel=1e-9)
    assert res.measure.sum() == pytest.approx(1.0, abs=1e-12)


def test_two_solver_agreement():
    coll = enumerate_class(PatternClass(Kind.EXCURSION, 6))
    g = alpha_potential(coll, 0.9)
    _, e_fw, _, _ = minimize_energy(g)
    _, e_pg = minimize_energy_projected(g)
    assert e_fw == pytest.approx(e_pg, rel=1e-6)


def test_capacity_monotone_nested():
    small = custom_collection(["+++"])
    big = custom_collection(["+++", "-++", "+-+"])
    for alpha in (0.5, 0.9):
        assert capacity_of(small, alpha).capacity <= capacity_of(big, alpha).capacity + 1e-12


def test_exact_matches_mc():
    coll = custom_collection(["++"])
    exact = hitting_probability_exact(coll, 0.9)
    est, se = hit_before_geometric(coll, 0.9, replications=20_000)
    assert abs(est - exact) <= 3 * se


def test_sandwich_built_ins():
    cases = [
        enumerate_class(PatternClass(Kind.EXCURSION, 6)),
        enumerate_class(PatternClass(Kind.POSITIVE, 5)),
        enumerate_class(PatternClass(Kind.BRIDGE, 6, level=0.0)),
        enumerate_class(PatternClass(Kind.FIRST_PASSAGE, 9, level=-1.0)),
    ]
    for coll in cases:
        for alpha in (0.5, 0.9):
            rep = sandwich(coll, alpha)
            assert rep.lower <= rep.exact <= rep.upper * (1 + 1e-9), (
                coll.label(),
                alpha,
                rep,
            )


def test_alpha_validation():
    coll = custom_collection(["++"])
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(PatternError):
            alpha_potential(coll, bad)
        with pytest.raises(PatternError):
            hitting_probability_exact(coll, bad)


def test_small_alpha_probability_small():
    coll = enumerate_class(PatternClass(Kind.EXCURSION, 6))
    p = hitting_probability_exact(coll, 0.05)
    assert p < 0.05
