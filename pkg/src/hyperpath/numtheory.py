"""Arithmetic over the integers and the prime field F_n.

Logarithms are taken with respect to the smallest primitive root of n, so
block orderings downstream are reproducible from run to run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

# Above this size discrete logs use baby-step/giant-step instead of a table.
LOG_TABLE_LIMIT = 10**5


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine for n up to ~10^7."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


@lru_cache(maxsize=None)
def factorize(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of m as ((p, e), ...) in ascending p."""
    if m < 1:
        raise ValueError(f"cannot factor {m}")
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def divisors(m: int) -> list[int]:
    if m < 1:
        raise ValueError(f"divisors need m >= 1, got {m}")
    ds = [1]
    for p, e in factorize(m):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError(f"euler_phi needs m >= 1, got {m}")
    out = m
    for p, _ in factorize(m):
        out -= out // p
    return out


def multiplicative_order(x: int, n: int) -> int:
    """Order of x in F_n^* for prime n, via the divisors of n - 1."""
    x %= n
    if x == 0:
        raise ValueError("0 has no multiplicative order")
    o = n - 1
    for p, _ in factorize(n - 1):
        while o % p == 0 and pow(x, o // p, n) == 1:
            o //= p
    return o


@lru_cache(maxsize=None)
def primitive_root(n: int) -> int:
    """Smallest generator of F_n^*."""
    if not is_prime(n):
        raise ValueError(f"{n} is not prime")
    if n == 2:
        return 1
    for g in range(2, n):
        if multiplicative_order(g, n) == n - 1:
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def _bsgs(g: int, u: int, n: int) -> int:
    m = math.isqrt(n - 1) + 1
    baby = {}
    cur = 1
    for j in range(m):
        baby.setdefault(cur, j)
        cur = cur * g % n
    giant = pow(g, -m, n)
    cur = u
    for i in range(m):
        if cur in baby:
            return (i * m + baby[cur]) % (n - 1)
        cur = cur * giant % n
    raise ValueError(f"{u} is not a power of {g} mod {n}")


@dataclass(frozen=True)
class PrimeModulus:
    """A prime n >= 5 together with its canonical generator and log table."""

    n: int
    lam: int = field(init=False)
    log_table: dict[int, int] = field(init=False, repr=False, compare=False)
    exp_table: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not is_prime(self.n) or self.n < 5:
            raise ValueError(f"need a prime n >= 5, got {self.n}")
        lam = primitive_root(self.n)
        object.__setattr__(self, "lam", lam)
        if self.n <= LOG_TABLE_LIMIT:
            powers = [1] * (self.n - 1)
            for k in range(1, self.n - 1):
                powers[k] = powers[k - 1] * lam % self.n
            table = {v: k for k, v in enumerate(powers)}
        else:
            powers, table = [], {}
        object.__setattr__(self, "exp_table", tuple(powers))
        object.__setattr__(self, "log_table", table)

    def _nonzero(self, x: int) -> int:
        x %= self.n
        if x == 0:
            raise ValueError("zero is not in F_n^*")
        return x

    def log(self, u: int) -> int:
        """The k in {0..n-2} with lam^k = u."""
        u = self._nonzero(u)
        if self.log_table:
            return self.log_table[u]
        return _bsgs(self.lam, u, self.n)

    def exp(self, k: int) -> int:
        if self.exp_table:
            return self.exp_table[k % (self.n - 1)]
        return pow(self.lam, k, self.n)

    def inv(self, x: int) -> int:
        return pow(self._nonzero(x), -1, self.n)

    def order(self, x: int) -> int:
        x = self._nonzero(x)
        if self.log_table:
            return (self.n - 1) // math.gcd(self.log_table[x], self.n - 1)
        return multiplicative_order(x, self.n)

    def order_of_power(self, x: int, j: int) -> int:
        """o(x^j) = o(x) / gcd(j, o(x))."""
        o = self.order(x)
        return o // math.gcd(j, o)

    def gcd_criterion(self, c: int) -> tuple[int, int, bool]:
        """Return (gcd(log c, h), gcd((n-1)/o(c), h), equal) with h = (n-1)/2.

        `equal` also requires gcd(log(-c), h) to agree with both.
        """
        c = self._nonzero(c)
        h = (self.n - 1) // 2
        g1 = math.gcd(self.log(c), h)
        g2 = math.gcd((self.n - 1) // self.order(c), h)
        g3 = math.gcd(self.log(-c), h)
        return g1, g2, g1 == g2 == g3


@lru_cache(maxsize=256)
def modulus(n: int) -> PrimeModulus:
    """Cached PrimeModulus; the object is immutable so sharing is safe."""
    return PrimeModulus(n)


def order(x: int, n: int) -> int:
    return modulus(n).order(x)


def discrete_log(u: int, n: int) -> int:
    return modulus(n).log(u)


def order_of_power(x: int, j: int, n: int) -> int:
    return modulus(n).order_of_power(x, j)


def gcd_criterion(n: int, c: int) -> tuple[int, int, bool]:
    return modulus(n).gcd_criterion(c)
