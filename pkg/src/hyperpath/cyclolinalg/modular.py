"""Gaussian elimination over word-size prime fields (numpy, int64).

All moduli stay below 2**31 so that products of two reduced entries fit in
a signed 64-bit integer.
"""
from __future__ import annotations

import random
from functools import lru_cache
from math import gcd

import numpy as np

from ..numtheory import factorize

PRIME_LO = 2**30
PRIME_HI = 2**31


def _is_prime_mr(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_primes(count: int, rng: random.Random, lo: int = PRIME_LO, hi: int = PRIME_HI) -> list[int]:
    out: list[int] = []
    while len(out) < count:
        p = rng.randrange(lo, hi) | 1
        if p not in out and _is_prime_mr(p):
            out.append(p)
    return out


@lru_cache(maxsize=None)
def primes_1_mod(k: int, count: int) -> tuple[int, ...]:
    """The first `count` primes p = 1 (mod k) with p >= 2**30."""
    out = []
    step = k if k % 2 == 0 else 2 * k
    p = PRIME_LO - PRIME_LO % step + 1
    if p < PRIME_LO:
        p += step
    while len(out) < count:
        if p >= PRIME_HI:
            raise ValueError(f"ran out of word-size primes = 1 mod {k}")
        if _is_prime_mr(p):
            out.append(p)
        p += step
    return tuple(out)


@lru_cache(maxsize=None)
def primitive_roots_of_unity(k: int, p: int) -> tuple[int, ...]:
    """All primitive k-th roots of unity mod p, as a^j for gcd(j, k) = 1.

    The tuple is ordered by j so index 0 is the base root a.
    """
    if (p - 1) % k:
        raise ValueError(f"{p} is not 1 mod {k}")
    qs = [q for q, _ in factorize(p - 1)]
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in qs):
        g += 1
    a = pow(g, (p - 1) // k, p)
    return tuple(pow(a, j, p) for j in range(1, k + 1) if gcd(j, k) == 1)


def reduce_mod(M, p: int) -> np.ndarray:
    """Integer matrix (nested lists, numpy, python ints) to int64 residues."""
    arr = np.asarray(M, dtype=object) if not isinstance(M, np.ndarray) else M
    if arr.dtype == object:
        arr = np.vectorize(lambda v: int(v) % p, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
    else:
        arr = np.mod(arr.astype(np.int64, copy=False), p)
    return np.ascontiguousarray(arr, dtype=np.int64)


def eliminate(M: np.ndarray, p: int, reduced: bool = False) -> list[int]:
    """Row-reduce M in place over F_p and return its pivot columns.

    With `reduced=True` the result is the reduced row echelon form; otherwise
    only entries below each pivot are cleared.
    """
    nrows, ncols = M.shape
    pivots: list[int] = []
    r = 0
    for j in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, j])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        piv = int(M[r, j])
        if piv != 1:
            M[r, j:] = M[r, j:] * pow(piv, -1, p) % p
        below = r + 1 + np.flatnonzero(M[r + 1 :, j])
        targets = np.concatenate((np.flatnonzero(M[:r, j]), below)) if reduced else below
        if targets.size:
            f = M[targets, j][:, None]
            M[targets, j:] = (M[targets, j:] - f * M[r, j:]) % p
        pivots.append(j)
        r += 1
    return pivots


def rank_mod_p(M, p: int) -> int:
    A = reduce_mod(M, p).copy()
    if A.size == 0:
        return 0
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = np.ascontiguousarray(A.T)
    return len(eliminate(A, p))


def rref_mod_p(M, p: int) -> tuple[np.ndarray, list[int]]:
    A = reduce_mod(M, p).copy()
    pivots = eliminate(A, p, reduced=True) if A.size else []
    return A[: len(pivots)], pivots


def det_mod_p(M, p: int) -> int:
    A = reduce_mod(M, p).copy()
    n = A.shape[0]
    det = 1
    for j in range(n):
        nz = np.flatnonzero(A[j:, j])
        if nz.size == 0:
            return 0
        i = j + int(nz[0])
        if i != j:
            A[[j, i]] = A[[i, j]]
            det = -det
        piv = int(A[j, j])
        det = det * piv % p
        inv = pow(piv, -1, p)
        below = j + 1 + np.flatnonzero(A[j + 1 :, j])
        if below.size:
            f = A[below, j][:, None] * inv % p
            A[below, j:] = (A[below, j:] - f * A[j, j:]) % p
    return det % p
