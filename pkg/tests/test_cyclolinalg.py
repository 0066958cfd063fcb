import cmath
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from hyperpath.cyclolinalg import (
    CycloNumber,
    certified_cyclo_rank,
    cyclo_det,
    cyclo_inverse,
    cyclo_left_kernel_check,
    cyclo_nullity,
    cyclo_rank,
    cyclotomic_poly,
    exponent_form,
    rank_bareiss,
    rank_mod_p,
    rational_nullity,
    rational_rank,
    rational_reconstruct,
)
from hyperpath.cyclolinalg.modular import det_mod_p, primes_1_mod, primitive_roots_of_unity, rref_mod_p
from hyperpath.numtheory import divisors, euler_phi

X = sympy.Symbol("x")


def as_complex(z: CycloNumber) -> complex:
    w = cmath.exp(2j * cmath.pi / z.k)
    return sum(float(c) * w**i for i, c in enumerate(z.coeffs))


def rand_cyclo(rng, k, lo=-3, hi=3):
    return CycloNumber(k, [Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(euler_phi(k))])


@pytest.mark.parametrize("k", range(1, 41))
def test_cyclotomic_poly_matches_sympy(k):
    ref = sympy.Poly(sympy.cyclotomic_poly(k, X), X).all_coeffs()[::-1]
    assert list(cyclotomic_poly(k)) == [int(v) for v in ref]
    assert len(cyclotomic_poly(k)) - 1 == euler_phi(k)


def test_cyclotomic_examples():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)


@pytest.mark.parametrize("r", [12, 30, 36])
def test_product_over_divisors(r):
    prod = sympy.Integer(1)
    for k in divisors(r):
        prod *= sum(c * X**i for i, c in enumerate(cyclotomic_poly(k)))
    assert sympy.expand(prod - (X**r - 1)) == 0


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 8, 9, 12, 15, 20, 24])
def test_field_axioms_random(k):
    rng = random.Random(k)
    one = CycloNumber.one(k)
    for _ in range(15):
        a, b = rand_cyclo(rng, k), rand_cyclo(rng, k)
        if not a.is_zero():
            assert a * a.inverse() == one
            assert (b / a) * a == b
        assert abs(as_complex(a * b) - as_complex(a) * as_complex(b)) < 1e-8
        assert abs(as_complex(a + b) - as_complex(a) - as_complex(b)) < 1e-8


def test_root_power_and_zero():
    w3 = CycloNumber.root_power(3, 1)
    assert w3 * w3 * w3 == 1
    assert 1 + w3 + w3 * w3 == 0
    assert CycloNumber.root_power(2, 1) == -1
    with pytest.raises(ZeroDivisionError):
        CycloNumber.zero(5).inverse()
    with pytest.raises(ValueError):
        CycloNumber.one(3) + CycloNumber.one(4)


def test_from_exponent_sum():
    z = CycloNumber.from_exponent_sum(4, {0: 1, 2: 1})  # 1 + i^2 = 0
    assert z.is_zero()
    assert CycloNumber.from_exponent_sum(6, {7: 2}) == CycloNumber.root_power(6, 1, 2)


def test_cyclo_det_examples():
    w3 = CycloNumber.root_power(3, 1)
    assert cyclo_det([[w3]]) == w3
    one, zero = CycloNumber.one(5), CycloNumber.zero(5)
    eye = [[one if i == j else zero for j in range(4)] for i in range(4)]
    assert cyclo_det(eye) == 1
    assert cyclo_nullity(eye) == 0
    assert cyclo_nullity([[zero] * 3 for _ in range(3)]) == 3
    with pytest.raises(ValueError):
        cyclo_det([[CycloNumber.one(3), CycloNumber.one(4)], [CycloNumber.one(3), CycloNumber.one(3)]])


@pytest.mark.parametrize("k", [3, 4, 5, 6, 7])
def test_cyclo_det_against_complex(k):
    rng = random.Random(100 + k)
    for t in (1, 2, 3, 4):
        M = [[rand_cyclo(rng, k, -2, 2) for _ in range(t)] for _ in range(t)]
        ref = np.linalg.det(np.array([[as_complex(x) for x in row] for row in M]))
        assert abs(as_complex(cyclo_det(M)) - ref) < 1e-6 * max(1, abs(ref))


def test_singular_cyclo_matrix_and_kernel():
    k = 5
    rng = random.Random(9)
    rows = [[rand_cyclo(rng, k) for _ in range(4)] for _ in range(3)]
    a = rand_cyclo(rng, k)
    rows.append([a * x + y for x, y in zip(rows[0], rows[1])])
    assert cyclo_det(rows).is_zero()
    assert cyclo_rank(rows) == 3
    v = [a, CycloNumber.one(k), CycloNumber.zero(k), CycloNumber.from_rational(k, -1)]
    assert cyclo_left_kernel_check(v, rows)
    assert not cyclo_left_kernel_check([CycloNumber.one(k)] + v[1:], rows)
    with pytest.raises(ValueError):
        cyclo_left_kernel_check(v[:3], rows)


def test_cyclo_inverse():
    rng = random.Random(4)
    for k in (3, 8, 9):
        M = [[rand_cyclo(rng, k) for _ in range(3)] for _ in range(3)]
        inv = cyclo_inverse(M)
        one, zero = CycloNumber.one(k), CycloNumber.zero(k)
        for i in range(3):
            for j in range(3):
                s = zero
                for m in range(3):
                    s = s + M[i][m] * inv[m][j]
                assert s == (one if i == j else zero)
    z = CycloNumber.zero(3)
    assert cyclo_inverse([[z, z], [z, z]]) is None


@pytest.mark.parametrize("k", [1, 2, 3, 4, 6, 9, 10, 12])
def test_certified_rank_matches_exact(k):
    rng = random.Random(k)
    for _ in range(10):
        t = rng.randint(1, 5)
        M = [[rand_cyclo(rng, k, -1, 1) if rng.random() < 0.6 else CycloNumber.zero(k) for _ in range(t)] for _ in range(t)]
        if t > 1 and rng.random() < 0.5:
            M[-1] = [x - y for x, y in zip(M[0], M[1])]
        assert certified_cyclo_rank(exponent_form(M), k) == cyclo_rank(M)


def test_modular_helpers():
    p = primes_1_mod(12, 2)
    assert all((q - 1) % 12 == 0 and q >= 2**30 for q in p)
    roots = primitive_roots_of_unity(12, p[0])
    assert len(roots) == euler_phi(12)
    assert all(pow(a, 12, p[0]) == 1 and all(pow(a, d, p[0]) != 1 for d in (1, 2, 3, 4, 6)) for a in roots)
    assert det_mod_p([[2, 1], [1, 1]], 101) == 1
    R, piv = rref_mod_p([[1, 2], [2, 4]], 101)
    assert piv == [0] and R.tolist() == [[1, 2]]


@pytest.mark.parametrize("m", [10**9 + 7, 2**61 - 1])
def test_rational_reconstruct(m):
    for q in [Fraction(3, 7), Fraction(-5, 2), Fraction(0), Fraction(123, 457)]:
        a = q.numerator * pow(q.denominator, -1, m) % m
        assert rational_reconstruct(a, m) == q


def test_rational_rank_examples():
    assert rational_rank([[0, 0], [0, 0]]) == 0
    assert rational_rank(np.zeros((3, 4), dtype=np.int64)) == 0
    assert rational_rank([[Fraction(1, 2), 1], [1, 2]]) == 1
    assert rational_nullity([[1, 2, 3], [2, 4, 6]]) == 2


def test_full_boundary_rank_n7():
    from itertools import combinations

    n = 7
    edges = {e: i for i, e in enumerate(combinations(range(n), 2))}
    cols = []
    for u, v, w in combinations(range(n), 3):
        col = [0] * len(edges)
        col[edges[(u, v)]] += 1
        col[edges[(u, w)]] -= 1
        col[edges[(v, w)]] += 1
        cols.append(col)
    D = np.array(cols, dtype=np.int64).T
    assert rational_rank(D) == 15 == rank_bareiss(D.tolist())


def test_accelerated_agrees_with_bareiss():
    rng = random.Random(2024)
    for _ in range(500):
        r, c = rng.randint(1, 20), rng.randint(1, 20)
        rank_target = rng.randint(0, min(r, c))
        L = np.array([[rng.randint(-3, 3) for _ in range(rank_target)] for _ in range(r)], dtype=object).reshape(r, rank_target)
        R = np.array([[rng.randint(-3, 3) for _ in range(c)] for _ in range(rank_target)], dtype=object).reshape(rank_target, c)
        M = (L.dot(R) if rank_target else np.zeros((r, c), dtype=object)).tolist()
        assert rational_rank(M, seed=rng.randint(0, 10**6)) == rank_bareiss(M) == sympy.Matrix(M).rank()


@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=6), st.randoms(use_true_random=False))
def test_rank_metamorphic(rows, rnd):
    base = rational_rank(rows)
    perm_rows = rows[:]
    rnd.shuffle(perm_rows)
    cols = list(range(4))
    rnd.shuffle(cols)
    permuted = [[r[j] for j in cols] for r in perm_rows]
    scaled = [list(r) for r in rows]
    scaled[0] = [Fraction(v) * Fraction(-3, 7) for v in scaled[0]]
    assert rational_rank(permuted) == base == rational_rank(scaled) == rank_bareiss(rows)


def test_rank_mod_p_lower_bound():
    M = [[3, 6], [1, 2]]
    assert rank_mod_p(M, 101) == 1
    assert rank_mod_p([[3, 1], [0, 3]], 3) == 1  # mod p can only lose rank
    assert rational_rank([[3, 1], [0, 3]]) == 2
