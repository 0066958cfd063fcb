"""Exact arithmetic in the cyclotomic fields Q(w_k) = Q[x] / Psi_k(x).

Elements are stored in the power basis 1, w, ..., w^(phi(k)-1) with
`fractions.Fraction` coordinates.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from ..numtheory import divisors, euler_phi


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_exact_div(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Quotient of integer polynomials (ascending coefficients), den monic."""
    num = list(num)
    dq = len(den) - 1
    q = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        coef = num[i]
        if coef:
            q[i - dq] = coef
            for j, dj in enumerate(den):
                num[i - dq + j] -= coef * dj
    if any(num[:dq]):
        raise ArithmeticError("division is not exact")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(k: int) -> tuple[int, ...]:
    """Coefficients of Psi_k in ascending degree; monic of degree phi(k)."""
    if k < 1:
        raise ValueError(f"cyclotomic polynomial needs k >= 1, got {k}")
    num = [-1] + [0] * (k - 1) + [1]  # x^k - 1
    for d in divisors(k)[:-1]:
        num = _poly_exact_div(num, cyclotomic_poly(d))
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(k: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^e mod Psi_k for 0 <= e < k."""
    psi = cyclotomic_poly(k)
    deg = len(psi) - 1
    rows = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(k):
        rows.append(tuple(cur))
        # multiply by x: shift, then fold the top coefficient back
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            cur = [ci - top * pi for ci, pi in zip(cur, psi[:deg])]
    return tuple(rows)


@lru_cache(maxsize=None)
def power_coeff_bound(k: int) -> int:
    """Largest |coefficient| of x^e mod Psi_k over 0 <= e < k."""
    return int(max(abs(v) for row in _power_table(k) for v in row))


def _reduce(coeffs: list, k: int) -> tuple[Fraction, ...]:
    psi = cyclotomic_poly(k)
    deg = len(psi) - 1
    c = [Fraction(v) for v in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        top = c[i]
        if top:
            for j in range(deg + 1):
                c[i - deg + j] -= top * psi[j]
    c = c[:deg] + [Fraction(0)] * (deg - len(c))
    return tuple(c)


class CycloNumber:
    """An element of Q(w_k)."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs: Iterable = ()):
        self.k = k
        self.coeffs = _reduce(list(coeffs), k)

    @classmethod
    def _raw(cls, k: int, coeffs: tuple[Fraction, ...]) -> "CycloNumber":
        obj = cls.__new__(cls)
        obj.k = k
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, k: int) -> "CycloNumber":
        return cls._raw(k, (Fraction(0),) * euler_phi(k))

    @classmethod
    def one(cls, k: int) -> "CycloNumber":
        return cls.from_rational(k, 1)

    @classmethod
    def from_rational(cls, k: int, q) -> "CycloNumber":
        c = [Fraction(0)] * euler_phi(k)
        c[0] = Fraction(q)
        return cls._raw(k, tuple(c))

    @classmethod
    def root_power(cls, k: int, e: int, scale=1) -> "CycloNumber":
        """scale * w_k^e."""
        row = _power_table(k)[e % k]
        s = Fraction(scale)
        return cls._raw(k, tuple(s * v for v in row))

    @classmethod
    def from_exponent_sum(cls, k: int, terms: dict[int, object]) -> "CycloNumber":
        """Sum of coef * w_k^e over a {e: coef} mapping (e taken mod k)."""
        table = _power_table(k)
        acc = [Fraction(0)] * euler_phi(k)
        for e, coef in terms.items():
            if coef:
                row = table[e % k]
                coef = Fraction(coef)
                for i, v in enumerate(row):
                    if v:
                        acc[i] += coef * v
        return cls._raw(k, tuple(acc))

    def _check(self, other: "CycloNumber") -> None:
        if self.k != other.k:
            raise ValueError(f"mixed conductors {self.k} and {other.k}")

    def _coerce(self, other) -> "CycloNumber":
        if isinstance(other, CycloNumber):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNumber.from_rational(self.k, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.k, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNumber._raw(self.k, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber._raw(self.k, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNumber._raw(self.k, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber._raw(self.k, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return CycloNumber._raw(self.k, _reduce(prod, self.k))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        """Inverse via the extended Euclidean algorithm against Psi_k."""
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse in Q(w_k)")
        r0 = [Fraction(v) for v in cyclotomic_poly(self.k)]
        r1 = _trim(list(self.coeffs))
        s0: list[Fraction] = [Fraction(0)]
        s1: list[Fraction] = [Fraction(1)]
        while any(r1):
            q, r = _divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_sub(s0, _mul(q, s1)))
        # r0 is now a nonzero constant (Psi_k irreducible)
        if len(r0) != 1:
            raise ArithmeticError("gcd with Psi_k is not constant")
        const = r0[0]
        return CycloNumber(self.k, [v / const for v in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __repr__(self) -> str:
        terms = [f"{c}*w^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return f"CycloNumber(k={self.k}: {' + '.join(terms) or '0'})"


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def _sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    b = _trim(list(b))
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        coef = a[i + len(b) - 1] / lead
        q[i] = coef
        if coef:
            for j, bj in enumerate(b):
                a[i + j] -= coef * bj
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


# Polynomial helpers over Q, reused by the MCB inverse (CRT over divisors).
poly_mul = _mul
poly_divmod = _divmod
poly_trim = _trim
poly_int_mul = _poly_mul
