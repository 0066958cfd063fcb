"""Exact ranks, determinants and kernels over Q and Q(w_k).

Two engines are provided and cross-checked in the tests:

* direct elimination with exact arithmetic (Bareiss over Z, Gaussian
  elimination over Q(w_k) with CycloNumber entries), suitable for small
  matrices;
* modular elimination with a certificate, used at scan scale.  A rank mod a
  prime is always a lower bound for the rank over Q (or over Q(w_k) when the
  prime splits); the matching upper bound comes either from the matrix shape,
  from exactly verified kernel vectors, or from a coefficient bound on minors
  combined with enough primes.  The result is exact in every case.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..numtheory import euler_phi
from .cyclotomic import CycloNumber, power_coeff_bound
from .modular import eliminate, primes_1_mod, primitive_roots_of_unity, random_primes, rref_mod_p

DEFAULT_SEED = 20240229


# --------------------------------------------------------------------------
# cyclotomic matrices, exact elimination


def _conductor(M: Sequence[Sequence[CycloNumber]]) -> int:
    ks = {x.k for row in M for x in row}
    if len(ks) > 1:
        raise ValueError(f"mixed conductors {sorted(ks)}")
    if not ks:
        raise ValueError("empty matrix has no conductor")
    return ks.pop()


def _cyclo_echelon(M: Sequence[Sequence[CycloNumber]]) -> tuple[int, CycloNumber]:
    """Forward elimination; returns (rank, determinant-if-square)."""
    k = _conductor(M)
    rows = [list(r) for r in M]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    det = CycloNumber.one(k)
    r = 0
    for j in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][j]), None)
        if piv is None:
            det = CycloNumber.zero(k)
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            det = -det
        p = rows[r][j]
        det = det * p
        pinv = p.inverse()
        for i in range(r + 1, nrows):
            if rows[i][j]:
                f = rows[i][j] * pinv
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == nrows:
            break
    if r < max(nrows, ncols):
        det = CycloNumber.zero(k)
    return r, det


def cyclo_det(M: Sequence[Sequence[CycloNumber]]) -> CycloNumber:
    if any(len(row) != len(M) for row in M):
        raise ValueError("determinant needs a square matrix")
    return _cyclo_echelon(M)[1]


def cyclo_rank(M: Sequence[Sequence[CycloNumber]]) -> int:
    return _cyclo_echelon(M)[0]


def cyclo_nullity(M: Sequence[Sequence[CycloNumber]]) -> int:
    """Dimension of the right kernel."""
    ncols = len(M[0]) if M else 0
    return ncols - cyclo_rank(M)


def cyclo_inverse(M: Sequence[Sequence[CycloNumber]]) -> list[list[CycloNumber]] | None:
    """Gauss-Jordan inverse over Q(w_k); None when M is singular."""
    k = _conductor(M)
    t = len(M)
    if any(len(row) != t for row in M):
        raise ValueError("inverse needs a square matrix")
    one, zero = CycloNumber.one(k), CycloNumber.zero(k)
    rows = [list(r) + [one if i == j else zero for j in range(t)] for i, r in enumerate(M)]
    for j in range(t):
        piv = next((i for i in range(j, t) if rows[i][j]), None)
        if piv is None:
            return None
        rows[j], rows[piv] = rows[piv], rows[j]
        pinv = rows[j][j].inverse()
        rows[j] = [x * pinv if x else x for x in rows[j]]
        for i in range(t):
            if i != j and rows[i][j]:
                f = rows[i][j]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[j])]
    return [row[t:] for row in rows]


def cyclo_vec_mat(v: Sequence[CycloNumber], M: Sequence[Sequence[CycloNumber]]) -> list[CycloNumber]:
    if len(v) != len(M):
        raise ValueError(f"vector of length {len(v)} against {len(M)} rows")
    k = _conductor(M)
    out = [CycloNumber.zero(k) for _ in M[0]]
    for vi, row in zip(v, M):
        if not vi:
            continue
        for j, mij in enumerate(row):
            if mij:
                out[j] = out[j] + vi * mij
    return out


def cyclo_left_kernel_check(v: Sequence[CycloNumber], M: Sequence[Sequence[CycloNumber]]) -> bool:
    """True iff v * M = 0 exactly."""
    return all(x.is_zero() for x in cyclo_vec_mat(v, M))


# --------------------------------------------------------------------------
# cyclotomic matrices, certified modular rank


def _integral_rows(T: np.ndarray) -> np.ndarray:
    """Scale each row of a (rows, cols, k) coefficient array to integers."""
    if T.dtype != object:
        return T.astype(np.int64)
    out = np.empty(T.shape, dtype=object)
    for i in range(T.shape[0]):
        den = 1
        for v in T[i].flat:
            den = math.lcm(den, Fraction(v).denominator)
        for idx, v in np.ndenumerate(T[i]):
            out[(i,) + idx] = int(Fraction(v) * den)
    return out


def _l1_bound(T: np.ndarray) -> int:
    """Permanent-style bound on the Z[x]/(x^k - 1) coefficients of any minor."""
    absT = np.abs(T)
    rows = [max(1, int(v)) for v in absT.sum(axis=(1, 2)).tolist()]
    cols = [max(1, int(v)) for v in absT.sum(axis=(0, 2)).tolist()]
    return min(math.prod(rows), math.prod(cols))


def _embed(T: np.ndarray, a: int, p: int) -> np.ndarray:
    """Evaluate sum_e T[..., e] * a^e mod p as an int64 matrix."""
    k = T.shape[2]
    out = np.zeros(T.shape[:2], dtype=np.int64)
    pw = 1
    for e in range(k):
        layer = T[:, :, e]
        if layer.dtype == object:
            if any(layer.flat):
                out = (out + np.mod(layer, p).astype(np.int64) * pw) % p
        elif layer.any():
            out = (out + np.mod(layer, p) * pw) % p
        pw = pw * a % p
    return out


def _rank_int64(M: np.ndarray, p: int) -> int:
    A = np.array(M, dtype=np.int64, copy=True)
    if A.shape[0] > A.shape[1]:
        A = np.ascontiguousarray(A.T)
    return len(eliminate(A, p)) if A.size else 0


def certified_cyclo_rank(T: np.ndarray, k: int) -> int:
    """Rank over Q(w_k) of the matrix whose (i, j) entry is sum_e T[i, j, e] w_k^e.

    T may hold ints or Fractions.  The first embedding usually settles
    full rank; otherwise every embedding of enough primes p = 1 (mod k) is
    examined until their product exceeds the coefficient bound on minors.
    """
    T = np.asarray(T)
    if T.ndim != 3 or T.shape[2] != k:
        raise ValueError(f"expected a (rows, cols, {k}) coefficient array")
    nrows, ncols = T.shape[:2]
    full = min(nrows, ncols)
    if full == 0:
        return 0
    T = _integral_rows(T)
    bound = None
    best = 0
    modulus = 1
    count = 1
    while True:
        primes = primes_1_mod(k, count)
        p = primes[-1]
        for a in primitive_roots_of_unity(k, p):
            best = max(best, _rank_int64(_embed(T, a, p), p))
            if best == full:
                return full
        modulus *= p
        if bound is None:
            bound = _l1_bound(T) * power_coeff_bound(k)
        if modulus > bound:
            return best
        count += 1


def certified_cyclo_nullity(T: np.ndarray, k: int) -> int:
    return T.shape[1] - certified_cyclo_rank(T, k)


def exponent_form(M: Sequence[Sequence[CycloNumber]]) -> np.ndarray:
    """Power-basis coordinates laid out as a (rows, cols, k) exponent array."""
    k = _conductor(M)
    out = np.zeros((len(M), len(M[0]), k), dtype=object)
    out[...] = 0
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            for e, c in enumerate(x.coeffs):
                out[i, j, e] = c
    return out


# --------------------------------------------------------------------------
# rational matrices


def _as_integer_rows(M) -> list[list[int]]:
    rows = []
    for row in M:
        row = [Fraction(v) for v in row]
        den = 1
        for v in row:
            den = math.lcm(den, v.denominator)
        rows.append([int(v * den) for v in row])
    return rows


def rank_bareiss(M) -> int:
    """Exact rank by fraction-free (Bareiss) elimination over Z."""
    A = _as_integer_rows(M)
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    r = 0
    prev = 1
    for j in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i][j]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][j]
        for i in range(r + 1, nrows):
            aij = A[i][j]
            Ai, Ar = A[i], A[r]
            for c in range(j + 1, ncols):
                Ai[c] = (pv * Ai[c] - aij * Ar[c]) // prev
            Ai[j] = 0
        prev = pv
        r += 1
        if r == nrows:
            break
    return r


def _to_int_array(M) -> np.ndarray:
    if isinstance(M, np.ndarray) and M.dtype != object:
        return M.astype(np.int64)
    rows = _as_integer_rows(M)
    arr = np.array(rows, dtype=object)
    if arr.size and max(abs(int(v)) for v in arr.flat) < 2**31:
        return arr.astype(np.int64)
    return arr


def _mod(A: np.ndarray, p: int) -> np.ndarray:
    return np.mod(A, p).astype(np.int64) if A.dtype == object else np.mod(A, p)


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Fraction u/v = a mod m with |u|, |v| <= sqrt(m/2), or None."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


class _HigherRank(Exception):
    def __init__(self, rank: int):
        self.rank = rank


def _kernel_certificate(A: np.ndarray, rank: int, primes: list[int], rng: random.Random, max_primes: int) -> bool:
    """Try to exhibit cols - rank independent rational kernel vectors of A.

    Raises _HigherRank when some prime reveals that the rank exceeds `rank`.
    """
    ncols = A.shape[1]
    residues: list[tuple[int, np.ndarray]] = []
    pivots_ref = None
    pool = list(primes)
    for _ in range(max_primes):
        p = pool.pop(0) if pool else random_primes(1, rng)[0]
        R, pivots = rref_mod_p(_mod(A, p), p)
        if len(pivots) > rank:
            raise _HigherRank(len(pivots))
        if len(pivots) < rank:
            continue
        if pivots_ref is None:
            pivots_ref = pivots
        elif pivots != pivots_ref:
            continue
        pivset = set(pivots)
        free = [j for j in range(ncols) if j not in pivset]
        residues.append((p, R[:, free]))
        vecs = _reconstruct_kernel(residues, pivots_ref, free, ncols)
        if vecs is not None and _verify_kernel(A, vecs):
            return True
    return False


def _reconstruct_kernel(residues, pivots, free, ncols) -> list[list[Fraction]] | None:
    m = 1
    crt = None
    for p, R in residues:
        R = R.astype(object)
        if crt is None:
            crt, m = R % p, p
        else:
            # combine x = crt mod m, x = R mod p
            inv = pow(m, -1, p)
            crt = crt + m * (((R - crt) * inv) % p)
            m *= p
    vecs = []
    for fi, f in enumerate(free):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            q = rational_reconstruct(-int(crt[i, fi]), m)
            if q is None:
                return None
            v[pc] = q
        vecs.append(v)
    return vecs


def _verify_kernel(A: np.ndarray, vecs: list[list[Fraction]]) -> bool:
    Aobj = A.astype(object)
    for v in vecs:
        den = 1
        for x in v:
            den = math.lcm(den, x.denominator)
        iv = np.array([int(x * den) for x in v], dtype=object)
        if any(Aobj.dot(iv)):
            return False
    return True


def rational_rank(M, seed: int = DEFAULT_SEED, n_primes: int = 2, max_primes: int = 12, accelerate: bool = True) -> int:
    """Exact rank over Q.

    With `accelerate`, ranks modulo `n_primes` random primes in [2^30, 2^31)
    give a lower bound.  It is accepted outright when it meets the shape
    bound; otherwise a rational kernel of matching dimension is reconstructed
    and checked exactly.  Bareiss elimination is the last resort.
    """
    A = _to_int_array(M)
    if A.ndim != 2 or A.size == 0:
        return 0
    if not accelerate:
        return rank_bareiss(A.tolist())
    rng = random.Random(seed)
    primes = random_primes(n_primes, rng)
    ranks = [_rank_int64(_mod(A, p), p) for p in primes]
    r0 = max(ranks)
    if r0 == min(A.shape):
        return r0
    while r0 < min(A.shape):
        try:
            if _kernel_certificate(A, r0, primes, rng, max_primes):
                return r0
            break
        except _HigherRank as exc:
            r0 = exc.rank
            primes = random_primes(n_primes, rng)
    else:
        return r0
    return rank_bareiss(A.tolist())


def rational_nullity(M, **kw) -> int:
    A = _to_int_array(M)
    return A.shape[1] - rational_rank(A, **kw)
