"""Exact linear solver unit tests."""

from fractions import Fraction

import numpy as np
import pytest

from walkpatterns import SingularMatrixError, fraction_gauss_solve, solve_int_system


def test_fraction_gauss_small():
    x = fraction_gauss_solve([[2, 1], [1, 3]], [3, 5])
    assert x == [Fraction(4, 5), Fraction(7, 5)]


def test_fraction_gauss_singular():
    with pytest.raises(SingularMatrixError):
        fraction_gauss_solve([[1, 2], [2, 4]], [1, 1])


def test_solvers_agree_random():
    rng = np.random.default_rng(42)
    for trial in range(10):
        d = int(rng.integers(2, 9))
        while True:
            a = rng.integers(-9, 10, size=(d, d)).astype(np.int64)
            if round(np.linalg.det(a.astype(float))) != 0:
                break
        b = [int(x) for x in rng.integers(-20, 21, size=d)]
        x_small = fraction_gauss_solve(a.tolist(), b)
        for i in range(d):
            assert sum(Fraction(int(a[i, j])) * x_small[j] for j in range(d)) == b[i]


def test_padic_path_matches_fraction_path():
    # force the p-adic branch with a system above the dense cutoff
    rng = np.random.default_rng(7)
    d = 40
    a = rng.integers(-50, 51, size=(d, d)).astype(np.int64)
    a += np.eye(d, dtype=np.int64) * 500  # diagonally dominant => nonsingular
    b = [int(x) for x in rng.integers(-1000, 1001, size=d)]
    x = solve_int_system(a, b)
    for i in range(d):
        assert sum(Fraction(int(a[i, j])) * x[j] for j in range(d)) == b[i]


def test_padic_large_entries():
    rng = np.random.default_rng(3)
    d = 60
    a = rng.integers(-(10**6), 10**6, size=(d, d)).astype(np.int64)
    a += np.eye(d, dtype=np.int64) * 10**7
    b = [int(x) for x in rng.integers(-(10**9), 10**9, size=d)]
    x = solve_int_system(a, b)
    for i in (0, d // 2, d - 1):
        assert sum(Fraction(int(a[i, j])) * x[j] for j in range(d)) == b[i]


def test_singular_detected_large():
    a = np.zeros((40, 40), dtype=np.int64)
    a[0] = 1
    a[1] = 2  # row 1 = 2 * row 0
    for i in range(2, 40):
        a[i, i] = 1
    with pytest.raises(SingularMatrixError):
        solve_int_system(a, [1] * 40)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        solve_int_system(np.ones((2, 3), dtype=np.int64), [1, 2])
