"""Exact rational solutions of integer linear systems.

Small systems go through plain Fraction Gaussian elimination with
partial pivoting on numerator magnitude.  Large systems (matching
matrices up to a few thousand rows, absorbing-chain systems up to
2^13 states) use a single-prime p-adic lift: one modular LU, then one
cheap lifting step per base-p digit, finished by rational
reconstruction with a shared denominator.  Solutions are verified
against an independent prime before being returned.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

# 25-bit primes: pivots/products stay below 2**50, so int64 dot products
# over up to 2**13 terms cannot overflow.
_PRIMES = (33554393, 33554383, 33554371, 33554347)
_DENSE_CUTOFF = 24
_PANEL = 64


class SingularMatrixError(ValueError):
    """The system matrix is singular over the rationals."""


def fraction_gauss_solve(
    rows: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]
) -> list[Fraction]:
    """Gaussian elimination over Fraction, pivoting on numerator magnitude."""
    d = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(d):
        piv = max(range(col, d), key=lambda r: abs(a[r][col].numerator))
        if a[piv][col] == 0:
            raise SingularMatrixError("zero pivot column")
        a[col], a[piv] = a[piv], a[col]
        prow = a[col]
        inv = 1 / prow[col]
        for r in range(col + 1, d):
            f = a[r][col] * inv
            if f:
                arow = a[r]
                for c in range(col, d + 1):
                    arow[c] -= f * prow[c]
    x = [Fraction(0)] * d
    for r in range(d - 1, -1, -1):
        s = a[r][d] - sum(a[r][c] * x[c] for c in range(r + 1, d))
        x[r] = s / a[r][r]
    return x


def _lu_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """In-place right-looking blocked LU mod p with partial pivoting.

    Returns (lu, perm).  Raises SingularMatrixError when no nonzero pivot
    exists mod p (caller retries with another prime).
    """
    d = a.shape[0]
    lu = np.mod(a, p).astype(np.int64)
    perm = np.arange(d)
    for k0 in range(0, d, _PANEL):
        k1 = min(k0 + _PANEL, d)
        # factor the panel with rank-1 updates
        for k in range(k0, k1):
            col = lu[k:, k] % p
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                raise SingularMatrixError(f"singular mod {p}")
            piv = k + nz[0]
            if piv != k:
                lu[[k, piv]] = lu[[piv, k]]
                perm[[k, piv]] = perm[[piv, k]]
            inv = pow(int(lu[k, k]), p - 2, p)
            lu[k + 1 :, k] = lu[k + 1 :, k] * inv % p
            if k + 1 < k1:
                lu[k + 1 :, k + 1 : k1] = (
                    lu[k + 1 :, k + 1 : k1]
                    - np.outer(lu[k + 1 :, k], lu[k, k + 1 : k1])
                ) % p
        if k1 < d:
            # propagate to the trailing matrix in one matmul
            l_panel = lu[k1:, k0:k1]
            lu[k0:k1, k1:] = _tri_solve_rows(lu[k0:k1, k0:k1], lu[k0:k1, k1:], p)
            lu[k1:, k1:] = (lu[k1:, k1:] - l_panel @ lu[k0:k1, k1:] % p) % p
    return lu, perm


def _tri_solve_rows(l_block: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Solve unit-lower-triangular L X = B mod p for a small block."""
    x = b % p
    for i in range(1, l_block.shape[0]):
        x[i] = (x[i] - l_block[i, :i] @ x[:i] % p) % p
    return x


def _lu_solve(lu: np.ndarray, perm: np.ndarray, dinv: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    d = lu.shape[0]
    y = b[perm] % p
    for i in range(1, d):
        y[i] = (y[i] - lu[i, :i] @ y[:i] % p) % p
    x = np.zeros(d, dtype=np.int64)
    for i in range(d - 1, -1, -1):
        x[i] = (y[i] - lu[i, i + 1 :] @ x[i + 1 :] % p) % p * dinv[i] % p
    return x


def _digits_to_int(digits: list[int], p: int) -> int:
    """Combine base-p digits (least significant first), divide and conquer."""
    vals = list(digits)
    shift = p
    while len(vals) > 1:
        nxt = []
        for i in range(0, len(vals) - 1, 2):
            nxt.append(vals[i] + shift * vals[i + 1])
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
        shift *= shift
    return vals[0]


def _rational_reconstruct(a: int, m: int, bound: int) -> tuple[int, int] | None:
    """Find n/d with a*d = n (mod m), |n| <= bound, 0 < d <= m // (2*bound)."""
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if math.gcd(r1, s1) != 1:
        return None
    return r1, s1


def solve_int_system(a: np.ndarray, b: Sequence[int]) -> list[Fraction]:
    """Exact rational solution of A x = b for an integer matrix A.

    A must fit in int64; entries of b are arbitrary Python ints.
    """
    a = np.asarray(a, dtype=np.int64)
    d = a.shape[0]
    if a.shape != (d, d) or len(b) != d:
        raise ValueError("shape mismatch")
    if d <= _DENSE_CUTOFF:
        return fraction_gauss_solve(a.tolist(), list(b))

    # Hadamard-style bound on numerator/denominator sizes
    row_norm2 = (a.astype(np.float64) ** 2).sum(axis=1)
    if np.any(row_norm2 == 0):
        raise SingularMatrixError("zero row")
    log2_det = 0.5 * float(np.log2(row_norm2).sum())
    bmax = max(1, max(abs(int(x)) for x in b))
    log2_num = log2_det + math.log2(bmax) + 0.5 * math.log2(d) + 1
    log2_target = 2 * max(log2_det, log2_num) + 8

    b_small = all(abs(int(x)) < 2**62 for x in b)
    b_arr = np.array([int(x) for x in b], dtype=np.int64) if b_small else None

    last_err: Exception | None = None
    for pi, p in enumerate(_PRIMES[:-1]):
        try:
            lu, perm = _lu_mod(a, p)
        except SingularMatrixError as err:
            last_err = err
            continue
        dinv = np.array([pow(int(lu[i, i]), p - 2, p) for i in range(d)], dtype=np.int64)
        m = int(math.ceil(log2_target / math.log2(p))) + 2

        # p-adic lifting: digit i satisfies A * (sum digits * p^i) = b (mod p^m)
        r = b_arr.copy() if b_arr is not None else [int(x) for x in b]
        digit_rows: list[np.ndarray] = []
        for _ in range(m):
            if isinstance(r, np.ndarray):
                rv = r
            else:
                rv = np.array([x % p for x in r], dtype=np.int64)
            xi = _lu_solve(lu, perm, dinv, rv % p, p)
            digit_rows.append(xi)
            ax = a @ xi
            if isinstance(r, np.ndarray):
                r = (r - ax) // p
            else:
                r = [(x - int(y)) // p for x, y in zip(r, ax)]

        modulus = p**m
        bound = math.isqrt(modulus // 2)
        values = [
            _digits_to_int([int(row[j]) for row in digit_rows], p) % modulus
            for j in range(d)
        ]

        # shared-denominator rational reconstruction
        den = 1
        nums: list[int] = []
        ok = True
        for v in values:
            t = v * den % modulus
            if t > modulus - t:
                cand = t - modulus
            else:
                cand = t
            if abs(cand) <= bound:
                nums.append(cand)
                continue
            rec = _rational_reconstruct(t, modulus, bound)
            if rec is None:
                ok = False
                break
            num, extra = rec
            sign = 1
            if t * extra % modulus != num % modulus:
                sign = -1
            nums = [x * extra for x in nums]
            nums.append(sign * num)
            den *= extra
        if not ok:
            last_err = SingularMatrixError("rational reconstruction failed")
            continue

        # verify against an independent prime
        q = _PRIMES[-1] if p != _PRIMES[-1] else _PRIMES[0]
        nq = np.array([x % q for x in nums], dtype=np.int64)
        lhs = np.zeros(d, dtype=np.int64)
        for j0 in range(0, d, 1024):
            lhs = (lhs + (a[:, j0 : j0 + 1024] % q) @ nq[j0 : j0 + 1024] % q) % q
        rhs = np.array([int(x) * (den % q) % q for x in b], dtype=np.int64)
        if not np.array_equal(lhs % q, rhs % q):
            last_err = SingularMatrixError("verification failed")
            continue

        return [Fraction(x, den) for x in nums]
    raise SingularMatrixError(str(last_err) if last_err else "no usable prime")
