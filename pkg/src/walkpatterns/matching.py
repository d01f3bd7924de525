"""Overlap (matching) matrices for pattern collections.

Entry (i, j) is sum over l of eps_l(A_i, A_j) / 2^l, where eps_l is 1
iff the first n-l increments of A_i coincide with the last n-l
increments of A_j.  Entries are exact rationals with denominator
2^(n-1); they are stored as a scaled int64 matrix.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import IO

import numpy as np

from .lattice import (
    Kind,
    LatticePath,
    PatternClass,
    PatternCollection,
    PatternError,
    count_positive_walks,
    lambda_n,
)

#: Largest collection for which a dense matrix is materialized.
MATRIX_CAP = 4096


class MatrixCapError(PatternError):
    """Collection too large for dense matrix storage."""


def overlap_indicator(a: LatticePath, b: LatticePath, l: int) -> int:
    """1 iff the first n-l increments of a equal the last n-l of b."""
    n = len(a)
    if len(b) != n:
        raise PatternError("length mismatch")
    if not 0 <= l <= n - 1:
        raise PatternError(f"shift l={l} outside [0, {n - 1}]")
    return int(a.prefix_bits(n - l) == b.suffix_bits(n - l))


@dataclass(frozen=True)
class MatchingMatrix:
    """Exact-rational matching matrix, stored as scaled/2^(n-1)."""

    n: int
    collection_ref: str
    scaled: np.ndarray  # int64, k x k

    @property
    def k(self) -> int:
        return self.scaled.shape[0]

    @property
    def scale(self) -> int:
        return 1 << (self.n - 1)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.scaled[i, j]), self.scale)

    def row_sums(self) -> list[Fraction]:
        return [Fraction(int(s), self.scale) for s in self.scaled.sum(axis=1, dtype=object)]

    def column_sums(self) -> list[Fraction]:
        return [Fraction(int(s), self.scale) for s in self.scaled.sum(axis=0, dtype=object)]

    def to_csv(self, stream: IO[str]) -> None:
        writer = csv.writer(stream)
        sc = self.scale
        for row in self.scaled:
            writer.writerow([str(Fraction(int(v), sc)) for v in row])

    def to_json_obj(self) -> dict:
        sc = self.scale
        return {
            "collection": self.collection_ref,
            "n": self.n,
            "k": self.k,
            "entries": [
                [
                    {"num": f.numerator, "den": f.denominator}
                    for f in (Fraction(int(v), sc) for v in row)
                ]
                for row in self.scaled
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def build_matching_matrix(collection: PatternCollection) -> MatchingMatrix:
    """Dense matching matrix; groups patterns by prefix/suffix per shift."""
    k = len(collection)
    if k > MATRIX_CAP:
        raise MatrixCapError(f"collection size {k} exceeds matrix cap {MATRIX_CAP}")
    n = collection.n
    paths = collection.paths
    scaled = np.zeros((k, k), dtype=np.int64)
    np.fill_diagonal(scaled, 1 << (n - 1))
    for l in range(1, n):
        m = n - l
        weight = 1 << (n - 1 - l)
        by_prefix: dict[int, list[int]] = {}
        by_suffix: dict[int, list[int]] = {}
        for idx, p in enumerate(paths):
            by_prefix.setdefault(p.prefix_bits(m), []).append(idx)
            by_suffix.setdefault(p.suffix_bits(m), []).append(idx)
        for key, rows in by_prefix.items():
            cols = by_suffix.get(key)
            if cols:
                scaled[np.ix_(rows, cols)] += weight
    return MatchingMatrix(n=n, collection_ref=collection.label(), scaled=scaled)


def positive_walk_multiplicity(n_half: int) -> Fraction:
    """Common row sum of the positive-walk matching matrix of length 2n+1:
    1 + sum_{l=1}^{2n} k(M^l) / 2^l."""
    if n_half < 1:
        raise PatternError("n_half must be >= 1")
    total = Fraction(1)
    for l in range(1, 2 * n_half + 1):
        total += Fraction(count_positive_walks(l), 1 << l)
    return total


def bridge_column_sum_bound(n_half: int) -> Fraction:
    """Upper bound 1 + sum_{l=1}^{2n-1} 2^-l C(l, floor(l/2)) for zero bridges."""
    total = Fraction(1)
    for l in range(1, 2 * n_half):
        total += Fraction(comb(l, l // 2), 1 << l)
    return total


def extreme_first_passage_pattern(lam: float, n: int) -> LatticePath:
    """The first passage pattern whose matching-matrix column sum dominates.

    Steps are -1 for the first |lambda_n|-1 positions, -1 at positions an
    odd offset past |lambda_n|, -1 at the last position, +1 elsewhere.
    """
    if lam >= 0:
        raise PatternError("lam must be negative")
    a = abs(lambda_n(lam, n))
    if a < 1:
        raise PatternError("|lambda_n| must be >= 1")
    steps = []
    for pos in range(1, n + 1):
        if pos <= a - 1 or pos == n or (pos > a - 1 and (pos - a) % 2 == 1):
            steps.append(-1)
        else:
            steps.append(1)
    return LatticePath.from_increments(steps)


def first_passage_column_sum(path: LatticePath) -> Fraction:
    """Closed-form column sum of the first passage matching matrix at this
    pattern's column: 1 + sum over l of 2^-l [S_l < 0] (|S_l|/l) C(l, (l+S_l)/2)."""
    n = len(path)
    h = path.heights
    total = Fraction(1)
    for l in range(1, n):
        s = h[l - 1]
        if s < 0:
            total += Fraction((-s) * comb(l, (l + s) // 2), l * (1 << l))
    return total


def collection_column_sums(collection: PatternCollection) -> list[Fraction]:
    """Column sums without materializing the matrix (prefix/suffix grouping)."""
    n = collection.n
    paths = collection.paths
    scale = 1 << (n - 1)
    sums = [scale] * len(paths)
    for l in range(1, n):
        m = n - l
        weight = 1 << (n - 1 - l)
        prefix_count: dict[int, int] = {}
        for p in paths:
            key = p.prefix_bits(m)
            prefix_count[key] = prefix_count.get(key, 0) + 1
        for j, p in enumerate(paths):
            c = prefix_count.get(p.suffix_bits(m))
            if c:
                sums[j] += weight * c
    return [Fraction(s, scale) for s in sums]


def excursion_matrix_is_identity(n_half: int) -> bool:
    """Direct check that excursions never overlap (matrix == identity)."""
    from .lattice import enumerate_class

    coll = enumerate_class(PatternClass(Kind.EXCURSION, 2 * n_half))
    mm = build_matching_matrix(coll)
    return bool(np.array_equal(mm.scaled, np.eye(len(coll), dtype=np.int64) * mm.scale))
