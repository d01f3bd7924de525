"""Endpoint-faithful meander resampling via the filling scheme.

A discrete meander of m steps is a walk conditioned to stay strictly
positive; its scaled endpoint is asymptotically Rayleigh.  To sample a
path whose endpoint follows a different target law (three-dimensional
Bessel bridge endpoint, or the co-meander's half-normal) the filling
scheme repeatedly draws fresh meanders: at stage i the draw is kept
with a probability read off layer i of a water-filling decomposition of
the target/base density ratio, so the accepted path is an honest
meander path while its endpoint has the target distribution (up to the
truncated residual mass).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .lattice import PatternError
from .montecarlo import DEFAULT_SEED

_STREAM_FILLING = 4

TARGETS = ("meander", "bessel3", "comeander")

#: grid for the density-ratio tables; the mass below GRID_LO is negligible
GRID_LO = 1e-3
GRID_HI = 6.0
GRID_POINTS = 2400


def meander_endpoint_cdf(x: np.ndarray | float) -> np.ndarray | float:
    """Rayleigh: 1 - exp(-x^2/2)."""
    x = np.maximum(x, 0.0)
    return 1.0 - np.exp(-np.square(x) / 2.0)


def bessel3_endpoint_cdf(x: np.ndarray | float) -> np.ndarray | float:
    """erf(x/sqrt(2)) - sqrt(2/pi) x exp(-x^2/2)."""
    x = np.maximum(x, 0.0)
    return erf(x / math.sqrt(2.0)) - math.sqrt(2.0 / math.pi) * x * np.exp(-np.square(x) / 2.0)


def comeander_endpoint_cdf(x: np.ndarray | float) -> np.ndarray | float:
    """Half-normal: erf(x/sqrt(2))."""
    x = np.maximum(x, 0.0)
    return erf(x / math.sqrt(2.0))


ENDPOINT_CDFS = {
    "meander": meander_endpoint_cdf,
    "bessel3": bessel3_endpoint_cdf,
    "comeander": comeander_endpoint_cdf,
}


def target_density_ratio(target: str, x: np.ndarray) -> np.ndarray:
    """Target endpoint density divided by the Rayleigh base density."""
    if target == "meander":
        return np.ones_like(x)
    if target == "bessel3":
        return math.sqrt(2.0 / math.pi) * x
    if target == "comeander":
        return math.sqrt(2.0 / math.pi) / np.maximum(x, GRID_LO)
    raise PatternError(f"unknown target {target!r}; choose from {TARGETS}")


@dataclass(frozen=True)
class FillingTables:
    """Water-filling layers for one target.

    ``c[i]`` is the absolute probability of rejecting stages 0..i; the
    stopping depth N satisfies P(N = k) = c[k-1] - c[k] (c[-1] = 1).
    The stage-i keep probability at endpoint x is closed-form from the
    surplus g0 and the scalars c, so only g0 is tabulated.
    """

    target: str
    grid: np.ndarray
    ratio: np.ndarray
    g0: np.ndarray  # surplus layer (ratio - 1)^+
    d0: np.ndarray  # stage-0 rejection probability (1 - ratio)^+
    c: np.ndarray  # continue probabilities, c[i] < residual at the end
    residual: float

    @property
    def depth(self) -> int:
        return len(self.c)

    def stop_distribution(self) -> np.ndarray:
        prev = np.concatenate([[1.0], self.c[:-1]])
        return prev - self.c

    def reject_probability(self, stage: int, x: np.ndarray) -> np.ndarray:
        """d_stage(x): probability of rejecting a stage-`stage` draw at x."""
        if stage == 0:
            return np.interp(x, self.grid, self.d0)
        c_prev = self.c[stage - 1]
        cum_prev = float(np.sum(self.c[: stage - 1])) if stage > 1 else 0.0
        # remaining surplus at this water level, then reject what overflows
        g_i = np.maximum(np.interp(x, self.grid, self.g0) - cum_prev, 0.0)
        return np.maximum(c_prev - g_i, 0.0) / c_prev


def build_filling_tables(
    target: str, residual: float = 0.01, max_depth: int = 5000
) -> FillingTables:
    """Compute the layer decomposition until the continue mass drops
    below ``residual``."""
    if not 0 < residual < 1:
        raise PatternError("residual must be in (0, 1)")
    grid = np.linspace(GRID_LO, GRID_HI, GRID_POINTS)
    p = grid * np.exp(-np.square(grid) / 2.0)
    ratio = target_density_ratio(target, grid)
    d0 = np.maximum(1.0 - ratio, 0.0)
    g0 = np.maximum(ratio - 1.0, 0.0)
    c_list: list[float] = []
    c_prev = float(np.trapezoid(d0 * p, grid))
    cum = 0.0
    while c_prev >= residual:
        c_list.append(c_prev)
        if len(c_list) > max_depth:
            raise PatternError("filling tables did not converge; raise residual")
        g_i = np.maximum(g0 - cum, 0.0)
        c_next = float(np.trapezoid(np.maximum(c_prev - g_i, 0.0) * p, grid))
        cum += c_prev
        c_prev = c_next
    c_list.append(c_prev)
    return FillingTables(
        target=target,
        grid=grid,
        ratio=ratio,
        g0=g0,
        d0=d0,
        c=np.array(c_list),
        residual=residual,
    )


def sample_meander_paths(
    m: int, count: int, rng: np.random.Generator
) -> tuple[np.ndarray, int]:
    """Rejection sampling of strictly positive m-step walks.

    Returns (heights array of shape (count, m), proposals used).
    """
    if m < 1 or count < 1:
        raise PatternError("m and count must be positive")
    accept_rate = math.comb(m - 1, (m - 1) // 2) / 2 ** (m - 1)
    chunk = max(64, min(int(1.5 * count / accept_rate) + 16, max(1, 4_000_000 // m)))
    out = np.empty((count, m), dtype=np.int64)
    got = 0
    proposals = 0
    while got < count:
        steps = rng.integers(0, 2, size=(chunk, m), dtype=np.int64) * 2 - 1
        s = np.cumsum(steps, axis=1)
        keep = s.min(axis=1) > 0
        proposals += chunk
        rows = s[keep]
        take = min(len(rows), count - got)
        out[got : got + take] = rows[:take]
        got += take
    return out, proposals


@dataclass(frozen=True)
class FillingSample:
    target: str
    m: int
    paths: np.ndarray  # (count, m) scaled heights
    endpoints: np.ndarray
    depths: np.ndarray  # accepted stage per sample
    restarts: int
    meanders_used: int
    proposals_used: int


def sample_via_filling(
    target: str,
    m: int,
    count: int,
    seed: int = DEFAULT_SEED,
    tables: FillingTables | None = None,
) -> FillingSample:
    """Draw ``count`` scaled meander paths whose endpoints follow the target.

    When a sample exhausts the tabulated depth (probability below the
    residual) it restarts from stage 0.
    """
    if tables is None:
        tables = build_filling_tables(target)
    elif tables.target != target:
        raise PatternError("tables were built for a different target")
    rng = np.random.default_rng([seed, _STREAM_FILLING, m])
    scale = 1.0 / math.sqrt(m)
    paths = np.empty((count, m), dtype=np.float64)
    endpoints = np.empty(count, dtype=np.float64)
    depths = np.empty(count, dtype=np.int64)
    stage = np.zeros(count, dtype=np.int64)
    active = np.arange(count)
    restarts = 0
    meanders = 0
    proposals = 0
    depth = tables.depth
    while active.size:
        batch, used = sample_meander_paths(m, active.size, rng)
        meanders += active.size
        proposals += used
        x = batch[:, -1] * scale
        reject = np.empty(active.size)
        for st in np.unique(stage[active]):
            sel = stage[active] == st
            reject[sel] = tables.reject_probability(int(st), x[sel])
        coin = rng.random(active.size)
        accepted = coin >= reject
        acc_idx = active[accepted]
        paths[acc_idx] = batch[accepted] * scale
        endpoints[acc_idx] = x[accepted]
        depths[acc_idx] = stage[acc_idx]
        active = active[~accepted]
        stage[active] += 1
        exhausted = active[stage[active] >= depth]
        restarts += exhausted.size
        stage[exhausted] = 0
    return FillingSample(
        target=target,
        m=m,
        paths=paths,
        endpoints=endpoints,
        depths=depths,
        restarts=restarts,
        meanders_used=meanders,
        proposals_used=proposals,
    )


def ks_distance(
    samples: np.ndarray,
    target: str,
    m: int | None = None,
    seed: int = DEFAULT_SEED,
) -> float:
    """Kolmogorov distance of scaled endpoints to the target CDF.

    Lattice endpoints carry atoms of width 2/sqrt(m); when m is given a
    seeded uniform jitter over the cell removes the discretization bias
    before comparing with the continuous law.
    """
    cdf = ENDPOINT_CDFS.get(target)
    if cdf is None:
        raise PatternError(f"unknown target {target!r}")
    values = np.asarray(samples, dtype=np.float64)
    if m is not None:
        jitter_rng = np.random.default_rng([seed, _STREAM_FILLING, 999, m])
        width = 2.0 / math.sqrt(m)
        values = values + width * (jitter_rng.random(len(values)) - 0.5)
        values = np.maximum(values, 0.0)
    values = np.sort(values)
    n = len(values)
    f = cdf(values)
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    return float(max(np.max(upper - f), np.max(f - lower)))
