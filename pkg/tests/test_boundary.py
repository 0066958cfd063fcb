import json
from math import comb

import numpy as np
import pytest

from hyperpath.boundary import (
    block_indexing,
    boundary_matrix,
    build_boundary,
    build_S_polynomial,
    equivariance_holds,
    poly_label,
    reduce_to_S,
    s_from_json,
    s_to_json,
    triangle_boundary,
)
from hyperpath.cyclolinalg import rational_rank
from hyperpath.mcb import is_circulant
from hyperpath.numtheory import modulus, primes_between
from hyperpath.scomplex import ComplexSpec, build_complex, eligible_cs

# the printed 5 x 5 block table for n = 13, c = 5: {(row leader, col leader): {exponent: coef}}
REFERENCE_S_13_5 = {
    (2, 3): {11: 1},
    (4, 4): {0: 1},
    (4, 8): {3: 1},
    (8, 8): {0: 1},
    (8, 6): {5: 1},
    (8, 0): {9: 1},
    (3, 4): {2: 1},
    (3, 3): {0: 1},
    (3, 6): {8: 1},
    (6, 8): {0: -1},
    (6, 3): {11: -1},
    (6, 6): {0: 1},
}


def test_boundary_column_signs():
    A = boundary_matrix(13, 5)
    col = A.columns[A.col_index[(1, 4, 12)]]
    got = {A.row_labels[i]: s for i, s in col.items()}
    assert got == {(1, 4): 1, (1, 12): -1, (4, 12): 1}
    assert all(len(c) == 3 for c in A.columns)
    assert (A.n_rows, A.n_cols) == (78, 66)


def test_triangle_boundary_alternates():
    assert triangle_boundary((3, 1, 2)) == [((1, 3), -1), ((2, 3), 1), ((1, 2), 1)]


def test_boundary_is_a_cycle_map():
    # d1 . d2 = 0 on every column
    A = boundary_matrix(11, 3)
    for col in A.columns:
        vertex_sum = {}
        for i, s in col.items():
            u, v = A.row_labels[i]
            vertex_sum[u] = vertex_sum.get(u, 0) - s
            vertex_sum[v] = vertex_sum.get(v, 0) + s
        assert not any(vertex_sum.values())


def test_block_indexing_running_example():
    bi = block_indexing(13, 5)
    assert bi.row_leaders == (2, 4, 8, 3, 6)
    assert bi.col_leaders == (4, 8, 3, 6, 0)
    assert [bi.col_face(j, 0) for j in range(5)] == [(1, 4, 12), (1, 8, 6), (1, 3, 7), (1, 6, 9), (1, 0, 5)]


@pytest.mark.parametrize("n", primes_between(11, 199))
def test_leader_count(n):
    for c in eligible_cs(n):
        bi = block_indexing(n, c)
        assert len(bi.row_leaders) == len(bi.col_leaders) == (n - 3) // 2


def test_running_example_S():
    S = build_S_polynomial(13, 5)
    assert S.dense().shape == (60, 60)
    bi = block_indexing(13, 5)
    rpos = {x: i for i, x in enumerate(bi.row_leaders)}
    cpos = {y: j for j, y in enumerate(bi.col_leaders)}
    expected = np.zeros((5, 5, 12), dtype=np.int64)
    for (x, y), terms in REFERENCE_S_13_5.items():
        for e, v in terms.items():
            expected[rpos[x], cpos[y], e] = v
    assert np.array_equal(S.coeffs, expected)
    assert poly_label(S.coeffs[rpos[3], cpos[4]]) == "P^2"
    assert poly_label(S.coeffs[rpos[2], cpos[3]]) == "P^11"
    assert poly_label(S.coeffs[rpos[6], cpos[3]]) == "-P^11"


@pytest.mark.parametrize("n", primes_between(11, 59))
def test_two_constructions_agree(n):
    pm = modulus(n)
    for c in eligible_cs(n):
        A = boundary_matrix(n, c)
        S = reduce_to_S(A, pm, c)
        assert S == build_S_polynomial(n, c, pm)


def surviving_terms(n, y, z):
    """Edges of (1, y, z) that avoid 0 and do not join u to -u."""
    return sum(1 for a, b in [(1, y), (1, z), (y, z)] if a and b and (a + b) % n)


@pytest.mark.parametrize("n", [13, 29, 31])
def test_blocks_are_circulant_and_sparse(n):
    for c in eligible_cs(n):
        S = build_S_polynomial(n, c)
        bi = block_indexing(n, c)
        D = S.dense()
        r = S.r
        for i in range(S.t):
            for j in range(S.t):
                assert is_circulant(D[i * r : (i + 1) * r, j * r : (j + 1) * r])
        support = np.abs(S.coeffs).sum(axis=(0, 2))
        for j, y in enumerate(bi.col_leaders):
            assert support[j] == surviving_terms(n, y, bi.z_of(y))
        assert support.max() <= 3
        assert support[-1] == 1  # y = 0: only the edge (1, z) survives


@pytest.mark.parametrize("n", primes_between(11, 31))
def test_equivariance(n):
    for c in eligible_cs(n):
        assert equivariance_holds(boundary_matrix(n, c), n, modulus(n).lam)


@pytest.mark.parametrize("n", primes_between(11, 31))
def test_rank_preservation(n):
    from hyperpath.mcb import codimension

    for c in eligible_cs(n):
        A = boundary_matrix(n, c)
        S = build_S_polynomial(n, c)
        assert A.n_cols - rational_rank(A.to_dense()) == S.r * S.t - rational_rank(S.dense()) == codimension(S)


def test_json_round_trip():
    S = build_S_polynomial(13, 5)
    text = s_to_json(S, 13, 5)
    doc = json.loads(text)
    assert {"n", "c", "blocks"} <= set(doc)
    assert {"row_leader": 3, "col_leader": 4, "poly": [0, 0, 1] + [0] * 9} in doc["blocks"]
    n, c, S2 = s_from_json(text)
    assert (n, c) == (13, 5) and S2 == S


def test_non_circulant_detected():
    from dataclasses import replace

    A = boundary_matrix(13, 5)
    m = next(m for m, (i, _, _) in enumerate(A.entries) if A.row_labels[i] == (1, 4))
    i, j, s = A.entries[m]
    broken = replace(A, entries=A.entries[:m] + ((i, j, -s),) + A.entries[m + 1 :])
    with pytest.raises(AssertionError):
        reduce_to_S(broken, modulus(13), 5)


def test_build_boundary_requires_d2():
    with pytest.raises(ValueError):
        build_boundary(build_complex(ComplexSpec(3, 11, 4)))


def test_full_boundary_rank_n7_via_facets():
    # rank of the full second boundary over all triangles is C(n-1, 2)
    from itertools import combinations

    n = 7
    rows = {e: i for i, e in enumerate(combinations(range(n), 2))}
    D = np.zeros((len(rows), comb(n, 3)), dtype=np.int64)
    for j, f in enumerate(combinations(range(n), 3)):
        for e, s in triangle_boundary(f):
            D[rows[e], j] += s
    assert rational_rank(D) == comb(n - 1, 2)
