"""Boundary matrix of X_{2,n,c} and its reduction to circulant-block form.

Conventions shared by every construction here:

* rows of A are the edges (u, v), u < v, in lexicographic order;
* columns of A are the faces (x, y, z) with x < y the non-c vertices and z
  the c-vertex, ordered by (x, y);
* the boundary of an oriented triangle (u, v, w) is
  e(u, v) - e(u, w) + e(v, w), with e(v, u) = -e(u, v).

The reduced matrix S drops the star rows {0, j}, eliminates the orbit
{u, -u, 0} together with the rows {u, -u}, and regroups what is left into
t = (n - 3)/2 row blocks lambda^i * (1, x) and column blocks
lambda^j * (1, y, z).  Every block is then a polynomial in the cyclic shift.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .mcb import McbMatrix
from .numtheory import PrimeModulus, modulus
from .scomplex import ComplexSpec, FaceSet, build_complex, check_eligible


def edge_sign(u: int, v: int) -> tuple[tuple[int, int], int]:
    """e(u, v) as (sorted edge, sign)."""
    if u == v:
        raise ValueError(f"degenerate edge ({u}, {v})")
    return ((u, v), 1) if u < v else ((v, u), -1)


def triangle_boundary(face) -> list[tuple[tuple[int, int], int]]:
    u, v, w = face
    return [edge_sign(u, v), (edge_sign(u, w)[0], -edge_sign(u, w)[1]), edge_sign(v, w)]


@dataclass(frozen=True, eq=False)
class SignedSparseMatrix:
    n_rows: int
    n_cols: int
    entries: tuple[tuple[int, int, int], ...]
    row_labels: tuple[tuple[int, ...], ...]
    col_labels: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.row_labels) != self.n_rows or len(self.col_labels) != self.n_cols:
            raise ValueError("label count does not match the shape")
        if len(set(self.row_labels)) != self.n_rows or len(set(self.col_labels)) != self.n_cols:
            raise ValueError("labels must be unique")

    @cached_property
    def row_index(self) -> dict[tuple[int, ...], int]:
        return {lab: i for i, lab in enumerate(self.row_labels)}

    @cached_property
    def col_index(self) -> dict[tuple[int, ...], int]:
        return {lab: j for j, lab in enumerate(self.col_labels)}

    @cached_property
    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [{} for _ in range(self.n_cols)]
        for i, j, s in self.entries:
            cols[j][i] = cols[j].get(i, 0) + s
        return cols

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.int64)
        for i, j, s in self.entries:
            out[i, j] += s
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedSparseMatrix):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and sorted(self.entries) == sorted(other.entries)
        )


def build_boundary(fs: FaceSet) -> SignedSparseMatrix:
    """The C(n,2) x |faces| signed matrix of the second boundary map."""
    if fs.spec.d != 2:
        raise ValueError("build_boundary handles d = 2")
    n = fs.spec.n
    rows = tuple(combinations(range(n), 2))
    rindex = {e: i for i, e in enumerate(rows)}
    faces = sorted(fs.faces, key=lambda f: f.vertices)
    entries = []
    for j, f in enumerate(faces):
        for e, s in triangle_boundary(f.vertices):
            entries.append((rindex[e], j, s))
    return SignedSparseMatrix(len(rows), len(faces), tuple(entries), rows, tuple(f.vertices for f in faces))


def boundary_matrix(n: int, c: int) -> SignedSparseMatrix:
    return build_boundary(build_complex(ComplexSpec(2, n, c)))


def equivariance_holds(A: SignedSparseMatrix, n: int, lam: int) -> bool:
    """d(lam * sigma) = lam * d(sigma) for every column of A."""
    for j, face in enumerate(A.col_labels):
        scaled = tuple(lam * v % n for v in face)
        lhs: dict[tuple[int, int], int] = {}
        for e, s in triangle_boundary(scaled):
            lhs[e] = lhs.get(e, 0) + s
        rhs: dict[tuple[int, int], int] = {}
        for i, s in A.columns[j].items():
            u, v = A.row_labels[i]
            e, s2 = edge_sign(lam * u % n, lam * v % n)
            rhs[e] = rhs.get(e, 0) + s * s2
        if lhs != rhs:
            return False
    return True


@dataclass(frozen=True)
class BlockIndexing:
    n: int
    c: int
    lam: int
    row_leaders: tuple[int, ...]
    col_leaders: tuple[int, ...]

    @property
    def r(self) -> int:
        return self.n - 1

    @property
    def t(self) -> int:
        return len(self.row_leaders)

    def z_of(self, y: int) -> int:
        """c-vertex of the face (1, y, z)."""
        n = self.n
        return -(1 + y) * pow(self.c, -1, n) % n

    def row_edge(self, block: int, i: int) -> tuple[int, int]:
        x = self.row_leaders[block]
        s = pow(self.lam, i, self.n)
        return (s, s * x % self.n)

    def col_face(self, block: int, j: int) -> tuple[int, int, int]:
        y = self.col_leaders[block]
        s = pow(self.lam, j, self.n)
        return (s, s * y % self.n, s * self.z_of(y) % self.n)


def block_indexing(n: int, c: int, pm: PrimeModulus | None = None) -> BlockIndexing:
    check_eligible(n, c)
    pm = pm or modulus(n)
    t = (n - 3) // 2

    def smaller_log(x: int) -> bool:
        return pm.log(x) <= pm.log(pm.inv(x))

    rows = sorted((x for x in range(2, n - 1) if smaller_log(x)), key=pm.log)
    excluded = {1, n - 1, -(1 + c) % n, -pow(1 + c, -1, n) % n}
    cols = sorted((y for y in range(1, n) if y not in excluded and smaller_log(y)), key=pm.log)
    cols.append(0)
    if len(rows) != t or len(cols) != t:
        raise ValueError(f"(n, c) = ({n}, {c}) gives {len(rows)} row and {len(cols)} column leaders, expected {t}")
    return BlockIndexing(n, c, pm.lam, tuple(rows), tuple(cols))


def _row_map(bi: BlockIndexing) -> dict[tuple[int, int], tuple[int, int, int]]:
    """Sorted edge -> (block, i, sign of lam^i (1, x) relative to the sorted edge)."""
    out = {}
    for b in range(bi.t):
        for i in range(bi.r):
            u, v = bi.row_edge(b, i)
            e, s = edge_sign(u, v)
            if e in out:
                raise AssertionError(f"edge {e} appears in two row blocks")
            out[e] = (b, i, s)
    return out


def reduce_to_S(A: SignedSparseMatrix, pm: PrimeModulus, c: int) -> McbMatrix:
    """Rank-preserving reduction of A to S in MCB_{n-1,(n-3)/2}.

    Rows touching 0 are dropped.  Each column (u, -u, 0) meets the remaining
    rows only in {u, -u}, so it and that row are removed by one trivial
    pivot.  Raises AssertionError if any block fails to be circulant.
    """
    n = pm.n
    bi = block_indexing(n, c, pm)
    r, t = bi.r, bi.t
    rmap = _row_map(bi)

    # the eliminated orbit: each column {u, -u, 0} has its only surviving entry on row {u, -u}
    for face, j in A.col_index.items():
        if 0 in face and sum(face) % n == 0:
            live = [A.row_labels[i] for i in A.columns[j] if 0 not in A.row_labels[i]]
            if len(live) != 1 or (live[0][0] + live[0][1]) % n:
                raise AssertionError(f"column {face} is not a trivial pivot")

    coeffs = np.zeros((t, t, r), dtype=np.int64)
    hit: dict[tuple[int, int, int], dict[int, int]] = {}
    used_cols = set()
    for yb in range(t):
        for j in range(r):
            u, v, w = bi.col_face(yb, j)
            key = (u, v, w) if u < v else (v, u, w)
            if key not in A.col_index:
                raise AssertionError(f"face {key} is missing from A")
            col = A.col_index[key]
            used_cols.add(col)
            csign = 1 if u < v else -1
            for i_row, s in A.columns[col].items():
                e = A.row_labels[i_row]
                if e not in rmap:
                    continue
                xb, i, rsign = rmap[e]
                off = (i - j) % r
                hit.setdefault((xb, yb, off), {})[j] = s * csign * rsign
    for (xb, yb, off), vals in hit.items():
        vs = set(vals.values())
        if len(vals) != r or len(vs) != 1:
            raise AssertionError(f"block ({bi.row_leaders[xb]}, {bi.col_leaders[yb]}) is not circulant")
        coeffs[xb, yb, off] = vs.pop()
    if len(used_cols) + (n - 1) // 2 != A.n_cols:
        raise AssertionError("column blocks do not cover the non-eliminated faces")
    return McbMatrix(coeffs)


def build_S_polynomial(n: int, c: int, pm: PrimeModulus | None = None) -> McbMatrix:
    """S assembled from the closed-form block terms.

    For the column block (1, y, z) and row block x, the three boundary edges
    contribute
      T1 from (1, y): I if y = x, -P^(-log x) if y = 1/x;
      T2 from (1, z): -I if z = x, +P^(-log x) if z = 1/x;
      T3 from (y, z), w = z/y: P^(log y) if w = x, -P^(log z) if w = 1/x.
    Terms whose edge meets 0 or joins u to -u are skipped: at y = 0 only T2
    survives, at y = c - 1 (z = -1) T2 drops, and at y = 1/(c - 1) (z = -y)
    T3 drops.
    """
    pm = pm or modulus(n)
    bi = block_indexing(n, c, pm)
    r, t = bi.r, bi.t
    coeffs = np.zeros((t, t, r), dtype=np.int64)
    rows = {x: b for b, x in enumerate(bi.row_leaders)}
    inv_rows = {pm.inv(x): b for b, x in enumerate(bi.row_leaders)}

    def add(ratio: int, yb: int, direct: tuple[int, int], inverted: tuple[int, int]) -> None:
        if ratio in rows:
            e, s = direct
            coeffs[rows[ratio], yb, e % r] += s
        elif ratio in inv_rows:
            e, s = inverted
            coeffs[inv_rows[ratio], yb, e % r] += s

    for yb, y in enumerate(bi.col_leaders):
        z = bi.z_of(y)
        if y != 0 and y != n - 1:
            add(y, yb, (0, 1), (-pm.log(pm.inv(y)), -1))  # T1, edge (1, y)
        if z != n - 1:
            add(z, yb, (0, -1), (-pm.log(pm.inv(z)), 1))  # T2, edge (1, z)
        if y != 0 and (y + z) % n:
            w = z * pm.inv(y) % n
            add(w, yb, (pm.log(y), 1), (pm.log(z), -1))  # T3, edge (y, z)
    return McbMatrix(coeffs)


def s_matrix(n: int, c: int) -> McbMatrix:
    return build_S_polynomial(n, c, modulus(n))


def s_to_json(S: McbMatrix, n: int, c: int) -> str:
    bi = block_indexing(n, c)
    blocks = [
        {"row_leader": bi.row_leaders[i], "col_leader": bi.col_leaders[j], "poly": [int(v) for v in S.coeffs[i, j]]}
        for i, j in S.nonzero_blocks()
    ]
    doc = {
        "n": n,
        "c": c,
        "lambda": bi.lam,
        "row_leaders": list(bi.row_leaders),
        "col_leaders": list(bi.col_leaders),
        "blocks": blocks,
    }
    return json.dumps(doc, sort_keys=False)


def s_from_json(text: str) -> tuple[int, int, McbMatrix]:
    doc = json.loads(text)
    n, c = int(doc["n"]), int(doc["c"])
    bi = block_indexing(n, c)
    rpos = {x: i for i, x in enumerate(bi.row_leaders)}
    cpos = {y: j for j, y in enumerate(bi.col_leaders)}
    coeffs = np.zeros((bi.t, bi.t, bi.r), dtype=np.int64)
    for blk in doc["blocks"]:
        poly = blk["poly"]
        if len(poly) != bi.r:
            raise ValueError(f"block polynomial has {len(poly)} coefficients, expected {bi.r}")
        coeffs[rpos[blk["row_leader"]], cpos[blk["col_leader"]]] = poly
    return n, c, McbMatrix(coeffs)


def poly_label(poly) -> str:
    """Human-readable block, e.g. 'P^11', '-I', 'P^3 - P^5', '0'."""
    terms = []
    for e, v in enumerate(poly):
        v = int(v)
        if not v:
            continue
        base = "I" if e == 0 else f"P^{e}"
        mag = "" if abs(v) == 1 else f"{abs(v)}"
        terms.append(("-" if v < 0 else "+", mag + base))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
