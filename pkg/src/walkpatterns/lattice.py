"""Lattice paths, the four built-in pattern classes, enumeration and counts.

A pattern is a finite walk with increments in {-1, +1}.  The built-in
classes are positive excursions, strictly positive walks, zero-or-level
bridges and negative first passage walks; each class fixes a common
length n and (where relevant) a scaled level that is rounded to the
lattice with the parity of n.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Sequence

#: Hard cap on the number of paths an enumeration may materialize.
ENUMERATION_CAP = 10**7


class PatternError(ValueError):
    """Invalid pattern class parameters or malformed pattern input."""


class EnumerationCapError(PatternError):
    """The class is too large to enumerate explicitly."""


def lambda_n(lam: float, n: int) -> int:
    """Lattice endpoint for scaled level ``lam``: floor(lam*sqrt(n)),
    bumped up by one when its parity disagrees with n."""
    if n < 1:
        raise PatternError(f"n must be >= 1, got {n}")
    v = math.floor(lam * math.sqrt(n))
    return v if (v - n) % 2 == 0 else v + 1


@dataclass(frozen=True)
class LatticePath:
    """Immutable +-1 walk stored as a packed bit sequence.

    Bit i of ``bits`` is set iff step i (0-based) is +1.  Heights are
    the prefix sums S_1..S_n; they are computed lazily and cached.
    """

    length: int
    bits: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise PatternError("empty path")
        if self.bits < 0 or self.bits >> self.length:
            raise PatternError("bits outside path length")

    @classmethod
    def from_increments(cls, increments: Iterable[int]) -> "LatticePath":
        bits = 0
        n = 0
        for s in increments:
            if s == 1:
                bits |= 1 << n
            elif s != -1:
                raise PatternError(f"increment must be -1 or +1, got {s!r}")
            n += 1
        return cls(n, bits)

    @classmethod
    def from_string(cls, text: str) -> "LatticePath":
        bits = 0
        for i, ch in enumerate(text):
            if ch == "+":
                bits |= 1 << i
            elif ch != "-":
                raise PatternError(f"pattern characters must be '+' or '-', got {ch!r}")
        return cls(len(text), bits)

    @property
    def increments(self) -> tuple[int, ...]:
        return tuple(1 if self.bits >> i & 1 else -1 for i in range(self.length))

    @property
    def heights(self) -> tuple[int, ...]:
        cached = self.__dict__.get("_heights")
        if cached is None:
            h, out = 0, []
            for s in self.increments:
                h += s
                out.append(h)
            cached = tuple(out)
            object.__setattr__(self, "_heights", cached)
        return cached

    @property
    def window_int(self) -> int:
        """Window encoding used by scanners: earliest step in the top bit."""
        n = self.length
        return sum(((self.bits >> i) & 1) << (n - 1 - i) for i in range(n))

    def negated(self) -> "LatticePath":
        return LatticePath(self.length, ~self.bits & ((1 << self.length) - 1))

    def prefix_bits(self, m: int) -> int:
        return self.bits & ((1 << m) - 1)

    def suffix_bits(self, m: int) -> int:
        return self.bits >> (self.length - m)

    def to_string(self) -> str:
        return "".join("+" if self.bits >> i & 1 else "-" for i in range(self.length))

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return self.to_string()

    def sort_key(self) -> tuple[int, ...]:
        # lexicographic with '-' < '+'
        return tuple((self.bits >> i) & 1 for i in range(self.length))


class Kind(enum.Enum):
    EXCURSION = "excursion"
    POSITIVE = "positive"
    BRIDGE = "bridge"
    FIRST_PASSAGE = "fp"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PatternClass:
    """A named family of equal-length patterns.

    ``level`` is only meaningful for BRIDGE (any real) and FIRST_PASSAGE
    (strictly negative); ``custom_paths`` only for CUSTOM.
    """

    kind: Kind
    length: int
    level: float | None = None
    custom_paths: tuple[LatticePath, ...] | None = None

    def __post_init__(self) -> None:
        n = self.length
        if n < 1:
            raise PatternError("pattern length must be positive")
        k = self.kind
        if k is Kind.EXCURSION and n % 2 != 0:
            raise PatternError("excursion length must be even")
        if k is Kind.POSITIVE and n % 2 != 1:
            raise PatternError("positive-walk length must be odd")
        if k is Kind.BRIDGE and self.level is None:
            raise PatternError("bridge requires a level")
        if k is Kind.FIRST_PASSAGE:
            if self.level is None or self.level >= 0:
                raise PatternError("first passage requires a level < 0")
            if self.endpoint() == 0:
                raise PatternError("first passage endpoint rounds to 0; pick larger |level| or n")
        if k is Kind.CUSTOM:
            if not self.custom_paths:
                raise PatternError("custom class requires at least one path")
            if any(len(p) != n for p in self.custom_paths):
                raise PatternError("custom paths must all have the class length")
            if len({p.bits for p in self.custom_paths}) != len(self.custom_paths):
                raise PatternError("duplicate custom pattern")
        elif self.custom_paths is not None:
            raise PatternError("custom_paths only valid for the custom kind")

    def endpoint(self) -> int | None:
        """Lattice endpoint lambda_n for bridge / first passage classes."""
        if self.kind in (Kind.BRIDGE, Kind.FIRST_PASSAGE):
            return lambda_n(self.level, self.length)
        return None

    def label(self) -> str:
        if self.kind is Kind.CUSTOM:
            return f"custom(n={self.length},k={len(self.custom_paths)})"
        if self.kind in (Kind.BRIDGE, Kind.FIRST_PASSAGE):
            return f"{self.kind.value}(lambda={self.level:g},n={self.length})"
        return f"{self.kind.value}(n={self.length})"


def is_member(path: LatticePath, pclass: PatternClass) -> bool:
    """Class membership predicate (strict inequalities throughout)."""
    n = pclass.length
    if len(path) != n:
        raise PatternError(f"path length {len(path)} != class length {n}")
    h = path.heights
    kind = pclass.kind
    if kind is Kind.EXCURSION:
        return h[-1] == 0 and all(x > 0 for x in h[:-1])
    if kind is Kind.POSITIVE:
        return all(x > 0 for x in h)
    lam = pclass.endpoint()
    if kind is Kind.BRIDGE:
        return h[-1] == lam
    if kind is Kind.FIRST_PASSAGE:
        return h[-1] == lam and all(x > lam for x in h[:-1])
    return any(path.bits == p.bits for p in pclass.custom_paths)


def count_positive_walks(length: int) -> int:
    """Number of walks of the given length with every height > 0."""
    if length < 1:
        raise PatternError("length must be positive")
    return comb(length - 1, (length - 1) // 2)


def count_class(pclass: PatternClass) -> int:
    """Closed-form size of the class."""
    n = pclass.length
    kind = pclass.kind
    if kind is Kind.EXCURSION:
        m = n // 2
        return comb(2 * m - 2, m - 1) // m
    if kind is Kind.POSITIVE:
        return count_positive_walks(n)
    if kind is Kind.BRIDGE:
        lam = pclass.endpoint()
        if abs(lam) > n:
            return 0
        return comb(n, (n + lam) // 2)
    if kind is Kind.FIRST_PASSAGE:
        # |lambda_n|/n * C(n, (n+|lambda_n|)/2); the count is positive-valued
        a = abs(pclass.endpoint())
        if a > n:
            return 0
        return a * comb(n, (n + a) // 2) // n
    return len(pclass.custom_paths)


def _enumerate_paths(pclass: PatternClass) -> Iterator[LatticePath]:
    """DFS with pruning, trying -1 before +1 so output is lexicographic."""
    n = pclass.length
    kind = pclass.kind
    lam = pclass.endpoint() if kind in (Kind.BRIDGE, Kind.FIRST_PASSAGE) else 0

    steps: list[int] = []

    def rec(i: int, h: int) -> Iterator[LatticePath]:
        if i == n:
            yield LatticePath.from_increments(steps)
            return
        for s in (-1, 1):
            nh = h + s
            j = i + 1
            if kind is Kind.EXCURSION:
                ok = (nh == 0 if j == n else nh >= 1 and nh <= n - j)
            elif kind is Kind.POSITIVE:
                ok = nh >= 1
            elif kind is Kind.BRIDGE:
                ok = abs(nh - lam) <= n - j
            else:
                ok = (nh == lam if j == n else nh > lam and nh - lam <= n - j)
            if ok:
                steps.append(s)
                yield from rec(j, nh)
                steps.pop()

    yield from rec(0, 0)


@dataclass(frozen=True)
class PatternCollection:
    """Deduplicated, lexicographically ordered list of equal-length paths."""

    pclass: PatternClass
    paths: tuple[LatticePath, ...]

    @property
    def n(self) -> int:
        return self.pclass.length

    def __len__(self) -> int:
        return len(self.paths)

    def label(self) -> str:
        return self.pclass.label()

    def closed_under_negation(self) -> bool:
        bits = {p.bits for p in self.paths}
        mask = (1 << self.n) - 1
        return all((~b & mask) in bits for b in bits)


def enumerate_class(pclass: PatternClass) -> PatternCollection:
    """Materialize the class as a sorted PatternCollection.

    Raises EnumerationCapError when the closed-form count exceeds the cap.
    """
    if pclass.kind is Kind.CUSTOM:
        paths = tuple(sorted(pclass.custom_paths, key=LatticePath.sort_key))
        return PatternCollection(pclass, paths)
    k = count_class(pclass)
    if k > ENUMERATION_CAP:
        raise EnumerationCapError(
            f"{pclass.label()} has {k} paths, above the cap {ENUMERATION_CAP}"
        )
    if k == 0:
        raise PatternError(f"{pclass.label()} is empty")
    paths = tuple(_enumerate_paths(pclass))
    assert len(paths) == k, f"enumeration produced {len(paths)} paths, expected {k}"
    return PatternCollection(pclass, paths)


def custom_collection(paths: Sequence[LatticePath | str]) -> PatternCollection:
    """Build a Custom collection from paths or '+-' strings."""
    parsed = tuple(
        p if isinstance(p, LatticePath) else LatticePath.from_string(p) for p in paths
    )
    if not parsed:
        raise PatternError("empty collection")
    pclass = PatternClass(Kind.CUSTOM, len(parsed[0]), custom_paths=parsed)
    return enumerate_class(pclass)


def load_patterns(lines: Iterable[str]) -> PatternCollection:
    """Parse the one-pattern-per-line format ('#' comments, blanks ignored)."""
    paths: list[LatticePath] = []
    seen: set[int] = set()
    n = None
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        p = LatticePath.from_string(line)
        if n is None:
            n = len(p)
        elif len(p) != n:
            raise PatternError(f"unequal pattern lengths: {len(p)} vs {n}")
        if p.bits in seen:
            raise PatternError(f"duplicate pattern {line!r}")
        seen.add(p.bits)
        paths.append(p)
    if not paths:
        raise PatternError("no patterns in file")
    return custom_collection(paths)


def dump_patterns(collection: PatternCollection) -> str:
    return "\n".join(p.to_string() for p in collection.paths) + "\n"
