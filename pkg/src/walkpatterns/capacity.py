"""Hitting probabilities of pattern sets under geometric killing.

The alpha-potential kernel of a collection induces an electrostatic
capacity; half the conductance-normalized capacity lower-bounds the
probability of seeing the set before an independent geometric clock
rings, and the full value upper-bounds it.  The minimizing measure is
found with Frank-Wolfe plus away steps (a projected-gradient solver is
kept as a reference), and both bounds are checked against an exact
killed-chain solve and a Monte Carlo estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .lattice import PatternCollection, PatternError
from .montecarlo import DEFAULT_SEED

_STREAM_CAPACITY = 3


def alpha_potential(collection: PatternCollection, alpha: float) -> np.ndarray:
    """Kernel G(a, b) = sum_k (alpha/2)^k [suffix_{n-k}(a) = prefix_{n-k}(b)]
    for k < n, plus the geometric tail (alpha/2)^n / (1 - alpha)."""
    if not 0 < alpha < 1:
        raise PatternError("alpha must be in (0, 1)")
    n = collection.n
    paths = collection.paths
    k = len(paths)
    tail = (alpha / 2) ** n / (1 - alpha)
    g = np.full((k, k), tail, dtype=np.float64)
    for shift in range(n):
        m = n - shift
        w = (alpha / 2) ** shift
        by_suffix: dict[int, list[int]] = {}
        by_prefix: dict[int, list[int]] = {}
        for idx, p in enumerate(paths):
            by_suffix.setdefault(p.suffix_bits(m), []).append(idx)
            by_prefix.setdefault(p.prefix_bits(m), []).append(idx)
        for key, rows in by_suffix.items():
            cols = by_prefix.get(key)
            if cols:
                g[np.ix_(rows, cols)] += w
    return g


@dataclass(frozen=True)
class CapacityResult:
    alpha: float
    collection_ref: str
    capacity: float
    energy: float
    measure: np.ndarray
    iterations: int
    gap: float


def minimize_energy(
    q: np.ndarray, tol: float = 1e-12, max_iter: int = 20_000
) -> tuple[np.ndarray, float, int, float]:
    """Minimize mu^T Q mu over the probability simplex.

    Frank-Wolfe with away steps and exact line search (the objective is
    quadratic, so the optimal step has a closed form).  Returns
    (mu, energy, iterations, duality gap).
    """
    k = q.shape[0]
    qs = (q + q.T) / 2
    mu = np.full(k, 1.0 / k)
    gap = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        grad = 2.0 * qs @ mu
        j_fw = int(np.argmin(grad))
        support = np.nonzero(mu > 1e-15)[0]
        j_aw = int(support[np.argmax(grad[support])])
        gap = float(grad @ mu - grad[j_fw])
        if gap <= tol * max(1.0, float(mu @ qs @ mu)):
            break
        fw_gain = float(grad @ mu - grad[j_fw])
        aw_gain = float(grad[j_aw] - grad @ mu)
        if fw_gain >= aw_gain:
            d = -mu.copy()
            d[j_fw] += 1.0
            gamma_max = 1.0
        else:
            d = mu.copy()
            d[j_aw] -= 1.0
            a = mu[j_aw]
            gamma_max = a / (1.0 - a) if a < 1.0 else 0.0
        dqd = float(d @ qs @ d)
        gd = float(grad @ d)
        if dqd <= 0:
            gamma = gamma_max
        else:
            gamma = min(gamma_max, max(0.0, -gd / (2.0 * dqd)))
        if gamma == 0.0:
            break
        mu = mu + gamma * d
        mu = np.maximum(mu, 0.0)
        mu /= mu.sum()
    energy = float(mu @ qs @ mu)
    return mu, energy, it, gap


def minimize_energy_projected(
    q: np.ndarray, tol: float = 1e-10, max_iter: int = 50_000
) -> tuple[np.ndarray, float]:
    """Reference solver: projected gradient descent on the simplex."""
    k = q.shape[0]
    qs = (q + q.T) / 2
    lip = float(np.linalg.norm(qs, 2)) * 2.0
    step = 1.0 / max(lip, 1e-12)
    mu = np.full(k, 1.0 / k)
    prev = math.inf
    for _ in range(max_iter):
        grad = 2.0 * qs @ mu
        mu = _project_simplex(mu - step * grad)
        cur = float(mu @ qs @ mu)
        if abs(prev - cur) <= tol * max(1.0, cur):
            break
        prev = cur
    return mu, float(mu @ qs @ mu)


def _project_simplex(v: np.ndarray) -> np.ndarray:
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def capacity_of(collection: PatternCollection, alpha: float, tol: float = 1e-12) -> CapacityResult:
    """Capacity 1 / min-energy of the symmetrized alpha-potential kernel."""
    g = alpha_potential(collection, alpha)
    mu, energy, it, gap = minimize_energy(g, tol=tol)
    if energy <= 0:
        raise PatternError("degenerate kernel energy")
    return CapacityResult(
        alpha=alpha,
        collection_ref=collection.label(),
        capacity=1.0 / energy,
        energy=energy,
        measure=mu,
        iterations=it,
        gap=gap,
    )


@dataclass(frozen=True)
class SandwichReport:
    alpha: float
    collection_ref: str
    lower: float
    upper: float
    exact: float | None
    mc_estimate: float | None
    mc_std_error: float | None

    def exact_within_bounds(self, rel_tol: float = 1e-9) -> bool:
        if self.exact is None:
            raise PatternError("no exact value computed")
        # the bound can be attained exactly, so allow float round-off
        slack = rel_tol * self.upper
        return self.lower - slack <= self.exact <= self.upper + slack


def hitting_probability_exact(collection: PatternCollection, alpha: float) -> float:
    """P(T(A) < T), i.e. E[alpha^(T(A) - n)]: the geometric clock ticks
    once per window-chain step, starting when the first window is formed
    (the chain starts uniform on the 2^n windows, as in the capacity
    framework -- killing during the warm-up steps would break the
    sandwich).

    Solves the killed chain on length-n windows: h(w) = 1 on members,
    h(w) = (alpha/2) sum over appended steps of h(shifted) elsewhere;
    the answer is 2^-n sum_w h(w).
    """
    if not 0 < alpha < 1:
        raise PatternError("alpha must be in (0, 1)")
    n = collection.n
    if n > 24:
        raise PatternError("exact killed-chain solve limited to n <= 24")
    size = 1 << n
    members = np.zeros(size, dtype=bool)
    for p in collection.paths:
        members[p.window_int] = True
    trans = np.nonzero(~members)[0]
    t_index = -np.ones(size, dtype=np.int64)
    t_index[trans] = np.arange(len(trans))
    mask = size - 1

    rows, cols, vals, rhs = [], [], [], np.zeros(len(trans))
    for i, w in enumerate(trans):
        rows.append(i)
        cols.append(i)
        vals.append(1.0)
        for s in (0, 1):
            nxt = ((int(w) << 1) & mask) | s
            if members[nxt]:
                rhs[i] += alpha / 2
            else:
                rows.append(i)
                cols.append(int(t_index[nxt]))
                vals.append(-alpha / 2)
    if len(trans):
        a = scipy.sparse.csr_matrix(
            (np.array(vals), (np.array(rows), np.array(cols))), shape=(len(trans), len(trans))
        )
        h_t = scipy.sparse.linalg.spsolve(a.tocsc(), rhs)
    else:
        h_t = np.zeros(0)
    total = float(members.sum()) + float(h_t.sum())
    return total / size


def hit_before_geometric(
    collection: PatternCollection,
    alpha: float,
    replications: int = 20_000,
    seed: int = DEFAULT_SEED,
) -> tuple[float, float]:
    """Monte Carlo estimate of P(T(A) < T): the first n steps are free
    (they form the initial window), then a survival coin with
    probability alpha is tossed before each further step; success iff a
    member window completes while alive.  Returns (estimate, SE)."""
    if not 0 < alpha < 1:
        raise PatternError("alpha must be in (0, 1)")
    n = collection.n
    members = np.zeros(1 << n, dtype=bool)
    for p in collection.paths:
        members[p.window_int] = True
    mask = (1 << n) - 1
    hits = 0
    for rep in range(replications):
        rng = np.random.default_rng([seed, _STREAM_CAPACITY, rep])
        # chain steps survived after the initial window
        lifetime = n + int(rng.geometric(1.0 - alpha)) - 1
        bits = rng.integers(0, 2, size=lifetime, dtype=np.int64)
        w = 0
        for t in range(lifetime):
            w = ((w << 1) & mask) | int(bits[t])
            if t >= n - 1 and members[w]:
                hits += 1
                break
    p_hat = hits / replications
    se = math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / replications)
    return p_hat, se


def sandwich(
    collection: PatternCollection,
    alpha: float,
    with_exact: bool = True,
    mc_replications: int = 0,
    seed: int = DEFAULT_SEED,
) -> SandwichReport:
    """Capacity sandwich on P(T(A) < T) with optional exact/MC checks."""
    cap = capacity_of(collection, alpha)
    scale = 2.0 ** (-collection.n) / (1.0 - alpha)
    upper = scale * cap.capacity
    lower = 0.5 * upper
    exact = hitting_probability_exact(collection, alpha) if with_exact else None
    mc_est = mc_se = None
    if mc_replications > 0:
        mc_est, mc_se = hit_before_geometric(collection, alpha, mc_replications, seed)
    return SandwichReport(
        alpha=alpha,
        collection_ref=collection.label(),
        lower=lower,
        upper=upper,
        exact=exact,
        mc_estimate=mc_est,
        mc_std_error=mc_se,
    )
