"""Matrices with circulant blocks.

An MCB_{r,t} matrix is a t x t grid of r x r circulant blocks.  Block (i, j)
is the polynomial g_ij(P) = sum_e coeffs[i, j, e] P^e in the cyclic shift P
(P e_m = e_{m+1}), so coeffs[i, j] is also the block's first column.

Singularity is decided divisor by divisor: E is singular iff the t x t
matrix E(w_k), obtained by substituting a primitive k-th root of unity for P,
is singular for some k | r.  Conjugate roots give Galois-conjugate matrices
of equal rank, hence rt - rank(E) = sum_k phi(k) * nullity(E(w_k)).

DFT convention used by `verify_block_diagonalization`: F[a, b] = w_r^(-ab),
so the diagonal block in slot b is E(w_r^(-b)).
"""
from __future__ import annotations

import math
from concurrent.futures import Executor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .cyclolinalg import CycloNumber, certified_cyclo_rank, cyclo_rank
from .cyclolinalg.cyclotomic import cyclotomic_poly, poly_divmod, poly_mul, poly_trim
from .cyclolinalg.linalg import cyclo_inverse
from .numtheory import divisors, euler_phi

ENGINES = ("modular", "exact")


class SingularMcbError(ArithmeticError):
    def __init__(self, witness_k: int):
        super().__init__(f"MCB matrix is singular (witness k = {witness_k})")
        self.witness_k = witness_k


def _normalize(coeffs: np.ndarray) -> np.ndarray:
    if coeffs.dtype == object:
        if all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1) for v in coeffs.flat):
            ints = [int(v) for v in coeffs.flat]
            if not ints or max(abs(v) for v in ints) < 2**62:
                return np.array(ints, dtype=np.int64).reshape(coeffs.shape)
        return coeffs
    if np.issubdtype(coeffs.dtype, np.integer):
        return coeffs.astype(np.int64)
    raise TypeError(f"unsupported coefficient dtype {coeffs.dtype}")


@dataclass(frozen=True, eq=False)
class McbMatrix:
    """coeffs has shape (t, t, r); integer (int64) or Fraction (object) entries."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs)
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[2] < 1:
            raise ValueError(f"coefficient array must have shape (t, t, r), got {c.shape}")
        object.__setattr__(self, "coeffs", _normalize(c))

    @property
    def t(self) -> int:
        return self.coeffs.shape[0]

    @property
    def r(self) -> int:
        return self.coeffs.shape[2]

    @classmethod
    def identity(cls, r: int, t: int) -> "McbMatrix":
        c = np.zeros((t, t, r), dtype=np.int64)
        for i in range(t):
            c[i, i, 0] = 1
        return cls(c)

    @classmethod
    def from_polys(cls, polys: Sequence[Sequence[Sequence]], r: int) -> "McbMatrix":
        t = len(polys)
        c = np.zeros((t, t, r), dtype=object)
        c[...] = 0
        for i, row in enumerate(polys):
            for j, g in enumerate(row):
                for e, v in enumerate(g):
                    c[i, j, e % r] += v
        return cls(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, McbMatrix) or self.coeffs.shape != other.coeffs.shape:
            return False
        return bool(np.all(self.coeffs == other.coeffs))

    def __matmul__(self, other: "McbMatrix") -> "McbMatrix":
        return mcb_multiply(self, other)

    def block(self, i: int, j: int) -> np.ndarray:
        """Dense circulant block (i, j)."""
        g = self.coeffs[i, j]
        r = self.r
        idx = (np.arange(r)[:, None] - np.arange(r)[None, :]) % r
        return g[idx]

    def dense(self) -> np.ndarray:
        r, t = self.r, self.t
        out = np.zeros((r * t, r * t), dtype=self.coeffs.dtype)
        for i in range(t):
            for j in range(t):
                out[i * r : (i + 1) * r, j * r : (j + 1) * r] = self.block(i, j)
        return out

    def nonzero_blocks(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.t) for j in range(self.t) if any(self.coeffs[i, j])]


@dataclass(frozen=True, eq=False)
class ScalarEval:
    """E(w_k): a t x t matrix over Q(w_k).

    `terms[i, j, e]` is the coefficient of w_k^e (e < k) in entry (i, j),
    i.e. the block polynomial folded modulo x^k - 1.
    """

    k: int
    terms: np.ndarray

    @cached_property
    def matrix(self) -> list[list[CycloNumber]]:
        k = self.k
        zero = CycloNumber.zero(k)
        out = []
        for i in range(self.terms.shape[0]):
            row = []
            for j in range(self.terms.shape[1]):
                t = self.terms[i, j].tolist()  # python ints, no int64 overflow
                nz = {e: v for e, v in enumerate(t) if v}
                row.append(CycloNumber.from_exponent_sum(k, nz) if nz else zero)
            out.append(row)
        return out

    def rank(self, engine: str = "modular") -> int:
        if engine == "modular":
            return certified_cyclo_rank(self.terms, self.k)
        if engine == "exact":
            return cyclo_rank(self.matrix)
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")

    def nullity(self, engine: str = "modular") -> int:
        return self.terms.shape[1] - self.rank(engine)


def evaluate(E: McbMatrix, k: int) -> ScalarEval:
    if k < 1 or E.r % k:
        raise ValueError(f"k = {k} does not divide r = {E.r}")
    t, r = E.t, E.r
    folded = E.coeffs.reshape(t, t, r // k, k).sum(axis=2)
    return ScalarEval(k, folded)


def _nullity_at(E: McbMatrix, k: int, engine: str) -> int:
    return evaluate(E, k).nullity(engine)


def divisor_nullities(E: McbMatrix, engine: str = "modular", executor: Executor | None = None) -> dict[int, int]:
    """nullity(E(w_k)) for every k | r; the divisors are independent jobs."""
    ks = divisors(E.r)
    if executor is None:
        vals = [_nullity_at(E, k, engine) for k in ks]
    else:
        vals = list(executor.map(_nullity_at, [E] * len(ks), ks, [engine] * len(ks)))
    return dict(zip(ks, vals))


def is_singular_fast(E: McbMatrix, engine: str = "modular") -> tuple[bool, int | None]:
    """(singular, smallest k | r with E(w_k) singular)."""
    for k in divisors(E.r):
        if evaluate(E, k).rank(engine) < E.t:
            return True, k
    return False, None


def codimension(E: McbMatrix, engine: str = "modular", executor: Executor | None = None) -> int:
    """rt - rank(E) = sum over k | r of phi(k) * nullity(E(w_k))."""
    return sum(euler_phi(k) * m for k, m in divisor_nullities(E, engine, executor).items())


def phi_permutation(r: int, t: int) -> list[int]:
    """The index map a*r + b -> b*t + a on {0, ..., rt - 1}."""
    if r < 1 or t < 1:
        raise ValueError("r and t must be positive")
    perm = [0] * (r * t)
    for a in range(t):
        for b in range(r):
            perm[a * r + b] = b * t + a
    return perm


def verify_block_diagonalization(E, tol: float = 1e-9, r: int | None = None, t: int | None = None) -> bool:
    """Numerically conjugate by the block DFT and the index permutation.

    E is an McbMatrix, or a dense (rt x rt) array together with r and t.
    The result must be block diagonal with block b equal to E(w_r^(-b)),
    where E(z) is read off the first columns of the r x r blocks.
    """
    if isinstance(E, McbMatrix):
        r, t = E.r, E.t
        D = E.dense().astype(float)
    else:
        if r is None or t is None:
            raise ValueError("dense input needs r and t")
        D = np.asarray(E, dtype=float)
    if D.shape != (r * t, r * t):
        raise ValueError(f"expected {(r * t, r * t)}, got {D.shape}")
    w = np.exp(2j * np.pi / r)
    idx = np.arange(r)
    F = w ** (-np.outer(idx, idx))
    L = np.kron(np.eye(t), F)
    Q = np.zeros((r * t, r * t))
    for i, j in enumerate(phi_permutation(r, t)):
        Q[j, i] = 1.0
    X = Q @ L
    Y = X @ D @ np.linalg.inv(X)
    first_cols = D.reshape(t, r, t, r)[:, :, :, 0]  # [a, e, a']
    expected = np.zeros_like(Y)
    for b in range(r):
        zb = w ** (-b * idx)  # powers of w_r^(-b)
        delta = np.einsum("aec,e->ac", first_cols, zb)
        expected[b * t : (b + 1) * t, b * t : (b + 1) * t] = delta
    return bool(np.max(np.abs(Y - expected)) <= tol)


def _cyclic_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    r = len(a)
    idx = (np.arange(r)[:, None] - np.arange(r)[None, :]) % r
    return a[idx].dot(b)


def mcb_multiply(E1: McbMatrix, E2: McbMatrix) -> McbMatrix:
    if E1.coeffs.shape != E2.coeffs.shape:
        raise ValueError(f"shape mismatch {E1.coeffs.shape} vs {E2.coeffs.shape}")
    t, r = E1.t, E1.r
    dtype = object if object in (E1.coeffs.dtype, E2.coeffs.dtype) else np.int64
    out = np.zeros((t, t, r), dtype=dtype)
    if dtype == object:
        out[...] = 0
    for i in range(t):
        for j in range(t):
            acc = out[i, j]
            for m in range(t):
                a, b = E1.coeffs[i, m], E2.coeffs[m, j]
                if any(a) and any(b):
                    acc = acc + _cyclic_mul(a.astype(dtype), b.astype(dtype))
            out[i, j] = acc
    return McbMatrix(out)


def _crt_idempotents(r: int) -> dict[int, list[Fraction]]:
    """e_k with e_k = 1 mod Psi_k and 0 mod Psi_j (j != k), degree < r."""
    xr1 = [Fraction(-1)] + [Fraction(0)] * (r - 1) + [Fraction(1)]
    out = {}
    for k in divisors(r):
        psi = [Fraction(v) for v in cyclotomic_poly(k)]
        cof, rem = poly_divmod(xr1, psi)
        assert not any(rem)
        u = CycloNumber(k, cof).inverse()
        e = poly_mul(cof, list(u.coeffs))
        _, e = poly_divmod(e, xr1)
        out[k] = e
    return out


def mcb_inverse(E: McbMatrix) -> McbMatrix:
    """Inverse inside MCB_{r,t}, assembled from the inverses of E(w_k) by CRT."""
    r, t = E.r, E.t
    parts = {}
    for k in divisors(r):
        M = evaluate(E, k).matrix
        inv = cyclo_inverse(M)
        if inv is None:
            raise SingularMcbError(k)
        parts[k] = inv
    idem = _crt_idempotents(r)
    xr1 = [Fraction(-1)] + [Fraction(0)] * (r - 1) + [Fraction(1)]
    out = np.zeros((t, t, r), dtype=object)
    out[...] = Fraction(0)
    for i in range(t):
        for j in range(t):
            acc = [Fraction(0)]
            for k, inv in parts.items():
                h = list(inv[i][j].coeffs)
                prod = poly_mul(h, idem[k])
                acc = [
                    (acc[m] if m < len(acc) else 0) + (prod[m] if m < len(prod) else 0)
                    for m in range(max(len(acc), len(prod)))
                ]
            _, rem = poly_divmod(poly_trim(acc), xr1)
            for e, v in enumerate(rem):
                out[i, j, e] = v
    return McbMatrix(out)


def random_mcb(rng, r: int, t: int, lo: int = -3, hi: int = 3, density: float = 1.0) -> McbMatrix:
    """Integer MCB with coefficients uniform in [lo, hi]; `density` zeroes blocks."""
    c = np.zeros((t, t, r), dtype=np.int64)
    for i in range(t):
        for j in range(t):
            if rng.random() < density:
                c[i, j] = [rng.randint(lo, hi) for _ in range(r)]
    return McbMatrix(c)


def is_circulant(block: np.ndarray) -> bool:
    r = block.shape[0]
    first = block[:, 0]
    idx = (np.arange(r)[:, None] - np.arange(r)[None, :]) % r
    return bool(np.all(block == first[idx]))


def gcd_of_dims(r: int, t: int) -> int:
    return math.gcd(r, t)
