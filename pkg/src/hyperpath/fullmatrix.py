"""The full matrix F_{n,c} = I + P_yz + P_zx and its relation to A.

Rows and columns of F are both indexed by the ordered pairs (x, y) != (0, 0);
column (x, y) stands for the triple (x, y, z) with x + y + c z = 0 and has
ones in rows (x, y), (y, z) and (z, x).

The pruned matrix bold-F drops the star rows (0, k) and one column from each
of the n - 1 identical pairs f(a, -(c+1)a, a) = f(-(c+1)a, a, a).  Its rows
are laid out as: pairs 1 <= x < y, the same pairs reversed, (x, x), (x, 0);
its columns as: triples with x < y (z distinct from both), the same triples
with x and y swapped, (x, x, -2x/c), (-(c+1)x, x, x).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .boundary import SignedSparseMatrix, boundary_matrix
from .cyclolinalg import rational_rank
from .scomplex import check_eligible

FULL_HEADER = ["n", "c", "rank_F", "full", "hypertree", "implication_holds"]


@dataclass(frozen=True, eq=False)
class FullMatrix:
    n: int
    c: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def dim(self) -> int:
        return len(self.pairs)

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {p: i for i, p in enumerate(self.pairs)}

    def z_of(self, x: int, y: int) -> int:
        return -(x + y) * pow(self.c, -1, self.n) % self.n

    def triple(self, j: int) -> tuple[int, int, int]:
        x, y = self.pairs[j]
        return (x, y, self.z_of(x, y))

    @cached_property
    def p_yz(self) -> np.ndarray:
        """p_yz[j] = row of the yz-entry of column j."""
        return np.array([self.index[(t[1], t[2])] for t in map(self.triple, range(self.dim))])

    @cached_property
    def p_zx(self) -> np.ndarray:
        return np.array([self.index[(t[2], t[0])] for t in map(self.triple, range(self.dim))])

    def column_rows(self, j: int) -> tuple[int, int, int]:
        return (j, int(self.p_yz[j]), int(self.p_zx[j]))

    def to_dense(self) -> np.ndarray:
        F = np.zeros((self.dim, self.dim), dtype=np.int64)
        cols = np.arange(self.dim)
        F[cols, cols] += 1
        F[self.p_yz, cols] += 1
        F[self.p_zx, cols] += 1
        return F

    def entry_rows(self, triple: tuple[int, int, int]) -> tuple[tuple[int, int], ...]:
        x, y, z = triple
        return ((x, y), (y, z), (z, x))


def build_full(n: int, c: int) -> FullMatrix:
    check_eligible(n, c)
    pairs = tuple((x, y) for x in range(n) for y in range(n) if (x, y) != (0, 0))
    return FullMatrix(n, c, pairs)


def is_permutation(p: np.ndarray) -> bool:
    return bool(np.array_equal(np.sort(p), np.arange(len(p))))


def decomposition_holds(F: FullMatrix) -> bool:
    """F = I + P_yz + P_zx with genuine permutations and binary entries."""
    if not (is_permutation(F.p_yz) and is_permutation(F.p_zx)):
        return False
    D = F.to_dense()
    return bool(np.all((D == 0) | (D == 1)) and np.all(D.sum(axis=0) == 3))


def duplicate_column_pairs(F: FullMatrix) -> list[tuple[tuple[int, int, int], tuple[int, int, int]]]:
    groups: dict[frozenset, list[int]] = {}
    for j in range(F.dim):
        groups.setdefault(frozenset(F.column_rows(j)), []).append(j)
    out = []
    for js in groups.values():
        for a, b in combinations(js, 2):
            out.append((F.triple(a), F.triple(b)))
    return out


def build_M(n: int, c: int) -> SignedSparseMatrix:
    """Rows rho(u, v) - rho(v, u) for u < v; columns x < y with z off both."""
    F = build_full(n, c)
    rows = tuple(combinations(range(n), 2))
    rindex = {e: i for i, e in enumerate(rows)}
    cols = []
    entries = []
    for x, y in rows:
        z = F.z_of(x, y)
        if z in (x, y):
            continue
        j = len(cols)
        cols.append((x, y, z))
        for u, v in F.entry_rows((x, y, z)):
            if (u, v) in rindex:
                entries.append((rindex[(u, v)], j, 1))
            else:
                entries.append((rindex[(v, u)], j, -1))
    return SignedSparseMatrix(len(rows), len(cols), tuple(entries), rows, tuple(cols))


@dataclass(frozen=True, eq=False)
class BoldLayout:
    row_labels: tuple[tuple[int, int], ...]
    col_labels: tuple[tuple[int, int, int], ...]
    m: int  # C(n-1, 2)


def bold_layout(n: int, c: int) -> BoldLayout:
    F = build_full(n, c)
    upper = [(x, y) for x, y in combinations(range(1, n), 2)]
    rows = upper + [(y, x) for x, y in upper] + [(x, x) for x in range(1, n)] + [(x, 0) for x in range(1, n)]
    lower = []
    for x, y in combinations(range(n), 2):
        z = F.z_of(x, y)
        if z not in (x, y):
            lower.append((x, y, z))
    cinv = pow(c, -1, n)
    cols = (
        lower
        + [(y, x, z) for x, y, z in lower]
        + [(x, x, -2 * x * cinv % n) for x in range(1, n)]
        + [(-(c + 1) * x % n, x, x) for x in range(1, n)]
    )
    return BoldLayout(tuple(rows), tuple(cols), len(upper))


def build_bold_F(n: int, c: int) -> tuple[np.ndarray, BoldLayout]:
    F = build_full(n, c)
    lay = bold_layout(n, c)
    if len(lay.row_labels) != n * n - n or len(lay.col_labels) != n * n - n:
        raise AssertionError("bold F must be (n^2 - n) square")
    rpos = {r: i for i, r in enumerate(lay.row_labels)}
    B = np.zeros((n * n - n, n * n - n), dtype=np.int64)
    for j, t in enumerate(lay.col_labels):
        for rr in F.entry_rows(t):
            if rr in rpos:
                B[rpos[rr], j] += 1
    return B, lay


def build_bold_A(n: int, c: int) -> np.ndarray:
    """A without the star rows {0, k}; rows and columns in A's own order."""
    A = boundary_matrix(n, c)
    keep = [i for i, (u, _) in enumerate(A.row_labels) if u != 0]
    return A.to_dense()[keep]


def f_into_a_holds(n: int, c: int) -> bool:
    """(I  -I  0) bold-F (I ; 0) = bold-A as an exact integer identity."""
    B, lay = build_bold_F(n, c)
    m = lay.m
    lhs = B[:m, :m] - B[m : 2 * m, :m]
    return bool(np.array_equal(lhs, build_bold_A(n, c)))


def star_dependency_holds(F: FullMatrix) -> bool:
    """sum_{j != k} rho(k, j) = sum_{i != k} rho(i, k) for every vertex k."""
    D = F.to_dense()
    for k in range(F.n):
        out_rows = [F.index[(k, j)] for j in range(F.n) if j != k]
        in_rows = [F.index[(i, k)] for i in range(F.n) if i != k]
        if not np.array_equal(D[out_rows].sum(axis=0), D[in_rows].sum(axis=0)):
            return False
    return True


def rank_full(n: int, c: int, seed: int | None = None) -> int:
    kw = {} if seed is None else {"seed": seed}
    return rational_rank(build_full(n, c).to_dense(), **kw)


@dataclass(frozen=True)
class FullRankRecord:
    n: int
    c: int
    rank_F: int
    hypertree: bool

    @property
    def full(self) -> bool:
        return self.rank_F == self.n * self.n - self.n

    @property
    def implication_holds(self) -> bool:
        return (not self.full) or self.hypertree

    def csv_row(self) -> list[str]:
        return [str(self.n), str(self.c), str(self.rank_F), str(int(self.full)), str(int(self.hypertree)), str(int(self.implication_holds))]


def full_rank_record(n: int, c: int) -> FullRankRecord:
    from .analysis import classify

    return FullRankRecord(n, c, rank_full(n, c), classify(n, c).is_hypertree)


def full_rank_implies_hypertree(n: int, c: int) -> bool:
    """True unless rank(F) = n^2 - n while X_{2,n,c} is not a hypertree."""
    return full_rank_record(n, c).implication_holds


def full_records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FULL_HEADER)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()
