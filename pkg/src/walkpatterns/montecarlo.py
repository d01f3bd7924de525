"""Streaming simulation of waiting times for pattern classes.

Walks are generated in blocks; first occurrences are detected with
vectorized trailing-window minima (scipy's moving-minimum filter).  A
per-step scanner with a monotonic deque provides the reference
implementation used by the equivalence tests.  Every replication draws
from its own RNG substream keyed by (seed, domain, replication), so
results do not depend on the worker count.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.ndimage import minimum_filter1d

from .lattice import Kind, PatternClass, PatternError

DEFAULT_SEED = 20260825
_STREAM_WAIT = 1
_STREAM_SLEPIAN = 2

#: max_steps values above this could overflow the int64 prefix sums
MAX_STEP_CAP = 1 << 40


@dataclass(frozen=True)
class SimConfig:
    seed: int = DEFAULT_SEED
    replications: int = 10_000
    max_steps: int = 1_000_000
    workers: int = 1

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise PatternError("replications must be >= 1")
        if not 1 <= self.max_steps <= MAX_STEP_CAP:
            raise PatternError(f"max_steps must be in [1, {MAX_STEP_CAP}]")
        if self.workers < 1:
            raise PatternError("workers must be >= 1")


@dataclass(frozen=True)
class SimResult:
    mean_wait: float
    std_error: float
    replications_completed: int
    censored: int
    biased: bool
    histogram: tuple[tuple[float, int], ...] | None = None

    @classmethod
    def from_waits(cls, waits: np.ndarray, censored: int) -> "SimResult":
        n = len(waits)
        mean = float(waits.mean())
        se = float(waits.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(mean, se, n, censored, biased=censored > 0)


def trailing_min(values: np.ndarray, window: int) -> np.ndarray:
    """out[i] = min(values[i-window+1 .. i]); entries before window-1 are
    edge-padded and should not be used."""
    if window == 1:
        return values
    return minimum_filter1d(values, size=window, origin=(window - 1) // 2, mode="nearest")


class WindowScanner:
    """Amortized O(1)-per-step occurrence detector for one pattern class.

    Keeps a ring buffer of the last n+1 heights and a monotonic deque
    (indices and values strictly increasing) whose front is the minimum
    of the trailing window each class predicate needs.
    """

    def __init__(self, pclass: PatternClass):
        self.pclass = pclass
        n = pclass.length
        self._n = n
        self._lam = pclass.endpoint() if pclass.kind in (Kind.BRIDGE, Kind.FIRST_PASSAGE) else 0
        self._t = 0
        self._h = 0
        self._ring = [0] * (n + 1)  # ring[t % (n+1)] = S_t; S_0 = 0
        self._minq: deque[tuple[int, int]] = deque()
        kind = pclass.kind
        if kind is Kind.EXCURSION:
            self._lag, self._wsize = 1, n - 1
        elif kind is Kind.POSITIVE:
            self._lag, self._wsize = 0, n
        elif kind is Kind.FIRST_PASSAGE:
            self._lag, self._wsize = 1, n
        else:
            self._lag, self._wsize = 0, 0
        self._members: set[int] | None = None
        self._window_bits = 0
        if kind is Kind.CUSTOM:
            self._members = {p.window_int for p in pclass.custom_paths}

    def _push_min(self, idx: int, value: int) -> None:
        q = self._minq
        while q and q[-1][1] >= value:
            q.pop()
        q.append((idx, value))

    def scan_step(self, increment: int) -> bool:
        if increment not in (-1, 1):
            raise PatternError("increment must be -1 or +1")
        n = self._n
        self._t += 1
        self._h += increment
        t, h = self._t, self._h
        self._ring[t % (n + 1)] = h
        if self._wsize > 0:
            pushed_idx = t - self._lag
            if pushed_idx >= 0:
                self._push_min(pushed_idx, self._ring[pushed_idx % (n + 1)])
            q = self._minq
            while q and q[0][0] < t - self._lag - self._wsize + 1:
                q.popleft()
        if self._members is not None:
            self._window_bits = ((self._window_bits << 1) & ((1 << n) - 1)) | (
                1 if increment == 1 else 0
            )
        if t < n:
            return False
        base = self._ring[(t - n) % (n + 1)]
        kind = self.pclass.kind
        if kind is Kind.CUSTOM:
            return self._window_bits in self._members
        if kind is Kind.BRIDGE:
            return h - base == self._lam
        wmin = self._minq[0][1] if self._minq else None
        if kind is Kind.EXCURSION:
            return h == base and (n == 2 or wmin > base)
        if kind is Kind.POSITIVE:
            return wmin > base
        # first passage
        return h - base == self._lam and wmin > h


def _first_hit_in_block(
    S: np.ndarray,
    j0: int,
    n: int,
    kind: Kind,
    lam: int,
) -> int | None:
    """First index j >= j0 whose length-n window ending at j is a member.

    S holds consecutive heights; index j - n must be valid for all j >= j0.
    """
    jmax = len(S)
    if j0 >= jmax:
        return None
    end = S[j0:]
    start = S[j0 - n : jmax - n]
    if kind is Kind.BRIDGE:
        mask = end - start == lam
    elif kind is Kind.EXCURSION:
        mask = end == start
        if n > 2:
            tm = trailing_min(S, n - 1)
            mask &= tm[j0 - 1 : jmax - 1] > start
    elif kind is Kind.POSITIVE:
        tm = trailing_min(S, n)
        mask = tm[j0:] > start
    elif kind is Kind.FIRST_PASSAGE:
        tm = trailing_min(S, n)
        mask = (end - start == lam) & (tm[j0 - 1 : jmax - 1] > end)
    else:
        raise PatternError("vectorized scan for custom classes uses window ints")
    hits = np.nonzero(mask)[0]
    if hits.size == 0:
        return None
    return j0 + int(hits[0])


def _first_custom_hit(bits: np.ndarray, j0_step: int, n: int, member: np.ndarray, carry: np.ndarray) -> int | None:
    """First step index (within carry+bits) whose window int is a member."""
    seq = np.concatenate([carry, bits])
    if len(seq) < n:
        return None
    windows = np.lib.stride_tricks.sliding_window_view(seq, n)
    pow2 = (1 << np.arange(n - 1, -1, -1)).astype(np.int64)
    w = windows @ pow2
    mask = member[w]
    if j0_step > 0:
        mask[: j0_step] = False
    hits = np.nonzero(mask)[0]
    if hits.size == 0:
        return None
    return int(hits[0])


def single_waiting_time(
    pclass: PatternClass, max_steps: int, rng: np.random.Generator, block: int | None = None
) -> tuple[int, bool]:
    """(first occurrence step, censored) for one replication."""
    n = pclass.length
    if block is None:
        block = max(4 * n, 1 << 13)
    kind = pclass.kind
    lam = pclass.endpoint() if kind in (Kind.BRIDGE, Kind.FIRST_PASSAGE) else 0

    if kind is Kind.CUSTOM:
        member = np.zeros(1 << n, dtype=bool)
        for p in pclass.custom_paths:
            member[p.window_int] = True
        carry = np.zeros(0, dtype=np.int64)
        done = 0
        while done < max_steps:
            b = min(block, max_steps - done)
            bits = rng.integers(0, 2, size=b, dtype=np.int64)
            skip = max(0, len(carry) - n + 1)
            hit = _first_custom_hit(bits, skip, n, member, carry)
            if hit is not None:
                # hit is the window start within carry+bits; occurrence step:
                return done - len(carry) + hit + n, False
            done += b
            carry = np.concatenate([carry, bits])[-(n - 1) :] if n > 1 else carry[:0]
        return max_steps, True

    hist = np.zeros(1, dtype=np.int64)  # S_0
    done = 0
    while done < max_steps:
        b = min(block, max_steps - done)
        inc = rng.integers(0, 2, size=b, dtype=np.int64) * 2 - 1
        S = np.concatenate([hist, hist[-1] + np.cumsum(inc)])
        base = done - (len(hist) - 1)  # absolute step of S[0]
        j0 = max(n - base, len(hist))
        hit = _first_hit_in_block(S, j0, n, kind, lam)
        if hit is not None:
            return base + hit, False
        done += b
        hist = S[-n:] if len(S) >= n else S
    return max_steps, True


def _run_reps(args: tuple) -> list[tuple[int, bool]]:
    pclass, max_steps, seed, stream, lo, hi = args
    out = []
    for rep in range(lo, hi):
        rng = np.random.default_rng([seed, stream, rep])
        out.append(single_waiting_time(pclass, max_steps, rng))
    return out


def _collect_waits(
    pclass: PatternClass, cfg: SimConfig, stream: int
) -> tuple[np.ndarray, int]:
    reps = cfg.replications
    if cfg.workers == 1:
        results = _run_reps((pclass, cfg.max_steps, cfg.seed, stream, 0, reps))
    else:
        chunk = max(1, -(-reps // (cfg.workers * 4)))
        jobs = [
            (pclass, cfg.max_steps, cfg.seed, stream, lo, min(lo + chunk, reps))
            for lo in range(0, reps, chunk)
        ]
        results = []
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for part in pool.map(_run_reps, jobs):
                results.extend(part)
    waits = np.array([w for w, _ in results], dtype=np.int64)
    censored = sum(1 for _, c in results if c)
    return waits, censored


def simulate_waiting_time(pclass: PatternClass, cfg: SimConfig) -> SimResult:
    """Monte Carlo estimate of the collection waiting time.

    Censored replications contribute max_steps and set the bias flag.
    """
    if cfg.max_steps < pclass.length:
        raise PatternError("max_steps below the pattern length")
    waits, censored = _collect_waits(pclass, cfg, _STREAM_WAIT)
    return SimResult.from_waits(waits.astype(np.float64), censored)


@dataclass(frozen=True)
class ExponentRow:
    n: int
    mean_wait: float
    std_error: float
    censored: int


@dataclass(frozen=True)
class ExponentTable:
    rows: tuple[ExponentRow, ...]
    zeta: tuple[float, ...]


def empirical_exponent_table(
    kind: Kind,
    n_grid: Sequence[int],
    cfg: SimConfig,
    level: float | None = None,
    reps_by_n: dict[int, int] | None = None,
) -> ExponentTable:
    """Mean waits over an n-grid plus consecutive-pair growth exponents."""
    from .waiting import exponent_fit

    if len(n_grid) < 2:
        raise PatternError("need at least two grid sizes")
    rows = []
    for n in n_grid:
        reps = (reps_by_n or {}).get(n, cfg.replications)
        sub = SimConfig(cfg.seed, reps, cfg.max_steps, cfg.workers)
        pclass = PatternClass(kind, n, level=level)
        res = simulate_waiting_time(pclass, sub)
        rows.append(ExponentRow(n, res.mean_wait, res.std_error, res.censored))
    zeta = exponent_fit([(r.n, r.mean_wait) for r in rows])
    return ExponentTable(tuple(rows), tuple(zeta))


@dataclass(frozen=True)
class SlepianResult:
    n: int
    mean_f_over_n: float
    se_f_over_n: float
    mean_wait_over_n: float
    prob_f_zero: float
    cdf_points: tuple[tuple[float, float], ...]
    censored: int


def slepian_first_level_bridge(
    n: int, cfg: SimConfig, cdf_grid: Sequence[float] = (0.5, 1.0, 2.0, 3.0, 5.0)
) -> SlepianResult:
    """Distribution of F_n/n where F_n is the first k with S_(k+n) = S_k.

    The waiting time of the zero bridge of length n is F_n + n.
    """
    if n % 2 != 0:
        raise PatternError("n must be even")
    pclass = PatternClass(Kind.BRIDGE, n, level=0.0)
    waits, censored = _collect_waits(pclass, cfg, _STREAM_SLEPIAN)
    f = (waits - n) / n
    cdf_points = tuple((float(x), float((f <= x).mean())) for x in cdf_grid)
    se = float(f.std(ddof=1) / math.sqrt(len(f))) if len(f) > 1 else 0.0
    return SlepianResult(
        n=n,
        mean_f_over_n=float(f.mean()),
        se_f_over_n=se,
        mean_wait_over_n=float(f.mean()) + 1.0,
        prob_f_zero=float((waits == n).mean()),
        cdf_points=cdf_points,
        censored=censored,
    )
