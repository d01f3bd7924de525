"""Exact expected waiting times for pattern collections.

The matching matrix M of a collection satisfies M x = 2^-n * 1 where
x_i = 1 / E T(A_i), and the collection wait is 1 / sum_i x_i.  The
independent cross-check is an absorbing Markov chain on the last n-1
increments, solved exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactsolve import SingularMatrixError, solve_int_system
from .lattice import (
    Kind,
    PatternClass,
    PatternCollection,
    PatternError,
    count_positive_walks,
    enumerate_class,
)
from .matching import MatchingMatrix, build_matching_matrix, positive_walk_multiplicity

#: Largest pattern length the absorbing-chain oracle will accept.
ORACLE_LENGTH_CAP = 14


@dataclass(frozen=True)
class WaitReport:
    """Exact waits plus floating views and an optional asymptotic ratio."""

    n: int
    collection_ref: str
    per_pattern: tuple[Fraction, ...]
    collection: Fraction
    asymptotic_ratio: float | None = None

    @property
    def per_pattern_float(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.per_pattern)

    @property
    def collection_float(self) -> float:
        return float(self.collection)

    def check_invariants(self) -> None:
        assert all(x >= self.n for x in self.per_pattern), "wait below pattern length"
        total = sum((1 / x for x in self.per_pattern), Fraction(0))
        assert 1 / total == self.collection, "reciprocal additivity violated"


def predicted_order(pclass: PatternClass) -> tuple[str, float | None]:
    """Leading-order growth of the collection wait, where the paper pins one."""
    n = pclass.length
    if pclass.kind is Kind.EXCURSION:
        m = n // 2
        return "4*sqrt(pi)*n^(3/2)", 4 * math.sqrt(math.pi) * m**1.5
    if pclass.kind is Kind.POSITIVE:
        m = (n - 1) // 2
        return "4*n", 4.0 * m
    if pclass.kind is Kind.BRIDGE:
        return "Theta(n) (between sqrt(pi*n) and 4n)", None
    if pclass.kind is Kind.FIRST_PASSAGE:
        return "between c*n and C*n^(5/4)", None
    return "no prediction", None


def solve_expected_waits(matrix: MatchingMatrix, pclass: PatternClass | None = None) -> WaitReport:
    """Expected waits from the matching matrix (exact rational solve)."""
    k = matrix.k
    if k == 0:
        raise PatternError("empty collection")
    try:
        # M x = 2^-n 1  <=>  scaled * (2x) = 1
        y = solve_int_system(matrix.scaled, [1] * k)
    except SingularMatrixError as err:
        raise SingularMatrixError(
            "matching matrix is singular; the collection data is corrupted"
        ) from err
    x = [yi / 2 for yi in y]
    if any(xi <= 0 for xi in x):
        raise SingularMatrixError("non-positive rate from the matching matrix")
    per_pattern = tuple(1 / xi for xi in x)
    collection = 1 / sum(x, Fraction(0))
    ratio = None
    if pclass is not None:
        _, pred = predicted_order(pclass)
        if pred:
            ratio = float(collection) / pred
    report = WaitReport(
        n=matrix.n,
        collection_ref=matrix.collection_ref,
        per_pattern=per_pattern,
        collection=collection,
        asymptotic_ratio=ratio,
    )
    report.check_invariants()
    return report


def solve_class(pclass: PatternClass) -> WaitReport:
    coll = enumerate_class(pclass)
    return solve_expected_waits(build_matching_matrix(coll), pclass)


def closed_form_excursion_wait(n_half: int) -> Fraction:
    """2^(2n) / k(E^(2n)): excursions never overlap, so M is the identity."""
    if n_half < 1:
        raise PatternError("n_half must be >= 1")
    k = math.comb(2 * n_half - 2, n_half - 1) // n_half
    return Fraction(1 << (2 * n_half), k)


def closed_form_positive_wait(n_half: int) -> Fraction:
    """2^(2n+1) * multiplicity / k(M^(2n+1)), multiplicity summed to l = 2n."""
    if n_half < 1:
        raise PatternError("n_half must be >= 1")
    k = count_positive_walks(2 * n_half + 1)
    return Fraction(1 << (2 * n_half + 1)) * positive_walk_multiplicity(n_half) / k


def brute_force_oracle(collection: PatternCollection) -> Fraction:
    """Expected waiting time from the absorbing chain on length-(n-1) suffixes.

    Completely independent of the matching matrix: states are the last
    n-1 increments, a step appends one increment, and the chain absorbs
    when the length-n window is a member.  Uses the sign-flip symmetry
    of the collection when available to halve the state space.
    """
    n = collection.n
    if n > ORACLE_LENGTH_CAP:
        raise PatternError(f"oracle limited to n <= {ORACLE_LENGTH_CAP}")
    members = {p.window_int for p in collection.paths}
    if n == 1:
        return Fraction(2, len(members))

    m = n - 1
    mask_m = (1 << m) - 1
    lump = collection.closed_under_negation()

    if lump:
        reps: dict[int, int] = {}
        order: list[int] = []
        for v in range(1 << m):
            r = min(v, ~v & mask_m)
            if r not in reps:
                reps[r] = len(order)
                order.append(r)
        index = lambda v: reps[min(v, ~v & mask_m)]
        states = order
    else:
        index = lambda v: v
        states = list(range(1 << m))

    d = len(states)
    a = np.zeros((d, d), dtype=np.int64)
    for row, v in enumerate(states):
        a[row, row] += 2
        for s in (0, 1):
            window = (v << 1) | s
            if window not in members:
                nxt = ((v << 1) & mask_m) | s
                a[row, index(nxt)] -= 1
    u = solve_int_system(a, [2] * d)

    total = Fraction(0)
    if lump:
        for row in range(d):
            total += 2 * u[row]
    else:
        total = sum(u, Fraction(0))
    return (n - 1) + total / (1 << m)


def exponent_fit(values: Sequence[tuple[float, float]]) -> list[float]:
    """Consecutive-pair log-ratio growth exponents from (n, wait) pairs."""
    if len(values) < 2:
        raise PatternError("need at least two (n, value) pairs")
    ns = [v[0] for v in values]
    ys = [v[1] for v in values]
    if any(n2 <= n1 for n1, n2 in zip(ns, ns[1:])):
        raise PatternError("n values must be strictly increasing")
    if any(y <= 0 for y in ys):
        raise PatternError("values must be positive")
    return [
        math.log(y2 / y1) / math.log(n2 / n1)
        for (n1, y1), (n2, y2) in zip(values, values[1:])
    ]
