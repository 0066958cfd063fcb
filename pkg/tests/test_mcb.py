import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy.combinatorics import Permutation

from hyperpath.boundary import build_S_polynomial
from hyperpath.cyclolinalg import CycloNumber, cyclo_det, cyclo_rank, rank_bareiss
from hyperpath.mcb import (
    McbMatrix,
    SingularMcbError,
    codimension,
    divisor_nullities,
    evaluate,
    is_circulant,
    is_singular_fast,
    mcb_inverse,
    mcb_multiply,
    phi_permutation,
    random_mcb,
    verify_block_diagonalization,
)
from hyperpath.numtheory import divisors, euler_phi

from mcb_corpus import random_instance


def single(r, poly):
    c = np.zeros((1, 1, r), dtype=np.int64)
    c[0, 0, : len(poly)] = poly
    return McbMatrix(c)


def test_dense_expansion_is_circulant():
    E = random_mcb(random.Random(1), 5, 3)
    D = E.dense()
    assert D.shape == (15, 15)
    for i in range(3):
        for j in range(3):
            B = D[5 * i : 5 * i + 5, 5 * j : 5 * j + 5]
            assert is_circulant(B)
            assert list(B[:, 0]) == list(E.coeffs[i, j])


def test_shift_convention():
    D = single(4, [0, 1]).dense()  # P e_m = e_{m+1}
    assert list(D[:, 0]) == [0, 1, 0, 0]


def test_evaluate_examples():
    I = McbMatrix.identity(6, 3)
    for k in divisors(6):
        M = evaluate(I, k).matrix
        assert all((M[i][j] == (1 if i == j else 0)) for i in range(3) for j in range(3))
    assert evaluate(single(2, [1, 1]), 2).matrix[0][0].is_zero()
    with pytest.raises(ValueError):
        evaluate(I, 4)


def test_evaluate_running_example_omega3():
    w = CycloNumber.root_power(3, 1)
    M = evaluate(build_S_polynomial(13, 5), 3).matrix
    one, zero = CycloNumber.one(3), CycloNumber.zero(3)
    w2 = w * w
    expected = [
        [zero, zero, w2, zero, zero],
        [one, one, zero, zero, zero],
        [zero, one, zero, w2, one],
        [w2, zero, one, w2, zero],
        [zero, -one, -w2, one, zero],
    ]
    assert M == expected


def test_is_singular_examples():
    assert is_singular_fast(single(2, [1, 1])) == (True, 2)
    assert is_singular_fast(McbMatrix.identity(6, 4)) == (False, None)
    singular, k = is_singular_fast(build_S_polynomial(13, 5))
    assert singular and k == 1  # S(1) is already singular; S(w_3) is singular too
    assert evaluate(build_S_polynomial(13, 5), 3).nullity() == 1


def test_codimension_examples():
    assert codimension(McbMatrix.identity(5, 2)) == 0
    assert codimension(single(2, [1, 1])) == 1
    S = build_S_polynomial(13, 5)
    assert codimension(S) == 60 - rank_bareiss(S.dense().tolist()) == 3


@pytest.mark.parametrize("engine", ["modular", "exact"])
def test_random_corpus_against_dense(engine):
    rng = random.Random(7 if engine == "modular" else 8)
    seen = set()
    for _ in range(150 if engine == "modular" else 60):
        E = random_instance(rng, t_max=6 if engine == "modular" else 4)
        deficiency = E.r * E.t - rank_bareiss(E.dense().tolist())
        singular, k = is_singular_fast(E, engine)
        assert singular == (deficiency > 0)
        assert codimension(E, engine) == deficiency
        if singular:
            assert evaluate(E, k).nullity(engine) > 0
            assert all(evaluate(E, j).nullity(engine) == 0 for j in divisors(E.r) if j < k)
        seen.add(singular)
    assert seen == {True, False}


def test_concurrent_divisor_evaluation():
    from concurrent.futures import ThreadPoolExecutor

    S = build_S_polynomial(29, 5)
    with ThreadPoolExecutor(4) as ex:
        assert divisor_nullities(S, executor=ex) == divisor_nullities(S)


def _at_root_power(r, j, coeffs):
    terms = {}
    for e, v in enumerate(coeffs):
        terms[j * e % r] = terms.get(j * e % r, 0) + int(v)
    return CycloNumber.from_exponent_sum(r, terms)


def _poly_det(E: McbMatrix):
    """det of the polynomial matrix over Q[x]/(x^r - 1), by Leibniz."""
    r, t = E.r, E.t
    total = [0] * r
    for perm in itertools.permutations(range(t)):
        sign = Permutation(list(perm)).signature()
        prod = [1] + [0] * (r - 1)
        for i, j in enumerate(perm):
            g = E.coeffs[i, j].tolist()
            nxt = [0] * r
            for a, pa in enumerate(prod):
                if pa:
                    for b, gb in enumerate(g):
                        if gb:
                            nxt[(a + b) % r] += pa * gb
            prod = nxt
        total = [x + sign * y for x, y in zip(total, prod)]
    return total


def test_determinant_commutes_with_evaluation():
    rng = random.Random(34)
    for _ in range(25):
        r, t = rng.randint(2, 8), rng.randint(1, 3)
        E = random_mcb(rng, r, t, -2, 2)
        det_poly = _poly_det(E)
        for j in range(r):
            lhs = _at_root_power(r, j, det_poly)
            M = [[_at_root_power(r, j, E.coeffs[a, b]) for b in range(t)] for a in range(t)]
            assert cyclo_det(M) == lhs


def test_nullity_constant_on_conjugacy_classes():
    rng = random.Random(55)
    for _ in range(40):
        E = random_instance(rng, r_max=8, t_max=3)
        r = E.r
        by_class = {}
        for j in range(r):
            M = [[_at_root_power(r, j, E.coeffs[a, b]) for b in range(E.t)] for a in range(E.t)]
            by_class.setdefault(r // np.gcd(r, j), set()).add(E.t - cyclo_rank(M))
        for k, vals in by_class.items():
            assert len(vals) == 1
            assert vals == {evaluate(E, k).nullity("exact")}


def test_phi_permutation():
    assert phi_permutation(3, 2)[5] == 5
    assert phi_permutation(3, 2)[1] == 2
    assert phi_permutation(1, 4) == list(range(4))
    assert phi_permutation(4, 1) == list(range(4))
    for r, t in [(3, 2), (12, 5), (7, 7)]:
        assert sorted(phi_permutation(r, t)) == list(range(r * t))
    with pytest.raises(ValueError):
        phi_permutation(0, 2)


def test_block_diagonalization():
    assert verify_block_diagonalization(McbMatrix.identity(4, 3), tol=1e-12)
    assert verify_block_diagonalization(build_S_polynomial(13, 5), tol=1e-9)
    rng = random.Random(3)
    for _ in range(5):
        assert verify_block_diagonalization(random_mcb(rng, rng.randint(2, 9), rng.randint(1, 4)), tol=1e-9)
    r, t = 4, 3
    D = np.array([[rng.randint(-3, 3) for _ in range(r * t)] for _ in range(r * t)])
    assert not verify_block_diagonalization(D, tol=1e-9, r=r, t=t)


def test_multiply():
    rng = random.Random(11)
    for _ in range(20):
        r, t = rng.randint(1, 7), rng.randint(1, 4)
        E1, E2 = random_mcb(rng, r, t), random_mcb(rng, r, t)
        P = mcb_multiply(E1, E2)
        assert np.array_equal(P.dense(), E1.dense() @ E2.dense())
        assert mcb_multiply(McbMatrix.identity(r, t), E1) == E1
    with pytest.raises(ValueError):
        mcb_multiply(McbMatrix.identity(2, 2), McbMatrix.identity(3, 2))


def test_group_closure():
    rng = random.Random(12)
    done = 0
    while done < 10:
        r, t = rng.randint(2, 6), rng.randint(1, 3)
        E1, E2 = random_mcb(rng, r, t), random_mcb(rng, r, t)
        if is_singular_fast(E1)[0] or is_singular_fast(E2)[0]:
            continue
        P = E1 @ E2
        assert not is_singular_fast(P)[0]
        D = P.dense()
        assert all(is_circulant(D[i * r : (i + 1) * r, j * r : (j + 1) * r]) for i in range(t) for j in range(t))
        done += 1


def test_inverse():
    inv = mcb_inverse(single(3, [2]))
    assert list(inv.coeffs[0, 0]) == [Fraction(1, 2), 0, 0]
    rng = random.Random(21)
    done = 0
    while done < 15:
        r, t = rng.randint(2, 8), rng.randint(1, 4)
        E = random_mcb(rng, r, t, -2, 2)
        if is_singular_fast(E)[0]:
            with pytest.raises(SingularMcbError) as err:
                mcb_inverse(E)
            assert err.value.witness_k in divisors(r)
            continue
        inv = mcb_inverse(E)
        assert E @ inv == McbMatrix.identity(r, t)
        ref = sympy.Matrix(E.dense().tolist()).inv()
        assert sympy.Matrix(inv.dense().tolist()) == ref
        done += 1


def test_inverse_singular_witness():
    with pytest.raises(SingularMcbError) as err:
        mcb_inverse(single(2, [1, 1]))
    assert err.value.witness_k == 2


def test_validation():
    with pytest.raises(ValueError):
        McbMatrix(np.zeros((2, 3, 4), dtype=np.int64))
    with pytest.raises(TypeError):
        McbMatrix(np.zeros((2, 2, 4)))
