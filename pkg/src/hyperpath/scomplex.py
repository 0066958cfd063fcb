"""The complexes X_{d,n,c} on vertex set F_n.

A (d+1)-set {x_0, ..., x_d} is a d-face iff, for some choice of one
coordinate x_j, c*x_j + (sum of the others) = 0 (mod n).  That coordinate is
the face's c-position; it is unique whenever c != 1.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import comb

from .numtheory import is_prime


@dataclass(frozen=True)
class ComplexSpec:
    d: int
    n: int
    c: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if not is_prime(self.n):
            raise ValueError(f"n = {self.n} is not prime")
        if not 0 <= self.c < self.n:
            raise ValueError(f"c = {self.c} must lie in [0, {self.n - 1}]")

    def check_pipeline(self) -> None:
        """Eligibility for the d = 2 hypertree pipeline."""
        if self.d != 2:
            raise ValueError("the boundary pipeline is only defined for d = 2")
        check_eligible(self.n, self.c)


def ineligibility_reason(n: int, c: int) -> str | None:
    """Why (n, c) is excluded from the d = 2 pipeline, or None if it is fine."""
    if not is_prime(n):
        return f"n = {n} is not prime"
    if n < 11:
        return f"n = {n} is below the supported minimum 11"
    if not 0 <= c < n:
        return f"c = {c} is outside F_{n}"
    if c == 0:
        return "c = 0 is excluded"
    if c == 1:
        return "c = 1 is excluded"
    if c == n - 1:
        return f"c = {c} is -1 mod {n}, excluded"
    if c == n - 2:
        return f"c = {c} is -2 mod {n}, excluded"
    return None


def check_eligible(n: int, c: int) -> None:
    reason = ineligibility_reason(n, c)
    if reason:
        raise ValueError(reason)


def eligible_cs(n: int) -> list[int]:
    return [c for c in range(2, n - 2)]


@dataclass(frozen=True)
class OrientedFace:
    vertices: tuple[int, ...]
    c_position: int

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))

    @property
    def c_vertex(self) -> int:
        return self.vertices[self.c_position]


@dataclass
class FaceSet:
    spec: ComplexSpec
    faces: list[OrientedFace]
    index: dict[tuple[int, ...], int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.faces)

    def __contains__(self, vertices) -> bool:
        return tuple(sorted(v % self.spec.n for v in vertices)) in self.index

    def face(self, vertices) -> OrientedFace:
        return self.faces[self.index[tuple(sorted(v % self.spec.n for v in vertices))]]


def _canonical(vertices: tuple[int, ...], cpos: int) -> OrientedFace:
    """Non-c vertices ascending, c-vertex last."""
    cv = vertices[cpos]
    rest = sorted(v for i, v in enumerate(vertices) if i != cpos)
    return OrientedFace(tuple(rest) + (cv,), len(rest))


def build_complex(spec: ComplexSpec) -> FaceSet:
    """Enumerate the d-faces of X_{d,n,c}.

    Every face is stored once, with non-c vertices ascending followed by the
    c-vertex.  For c = 1 there is no distinguished coordinate; the largest
    vertex is recorded in c-position.
    """
    d, n, c = spec.d, spec.n, spec.c
    faces: list[OrientedFace] = []
    index: dict[tuple[int, ...], int] = {}

    def add(face: OrientedFace) -> None:
        key = face.key
        if key not in index:
            index[key] = len(faces)
            faces.append(face)

    if c == 0:
        # the c-vertex is free; the others sum to zero
        for rest in itertools.combinations(range(n), d):
            if sum(rest) % n == 0:
                for y in range(n):
                    if y not in rest:
                        add(OrientedFace(rest + (y,), d))
        return FaceSet(spec, faces, index)

    cinv = pow(c, -1, n)
    # every d-subset of the non-c vertices determines the c-vertex
    for rest in itertools.combinations(range(n), d):
        z = (-sum(rest) * cinv) % n
        if z in rest:
            continue
        if c == 1:
            vs = tuple(sorted(rest + (z,)))
            add(OrientedFace(vs, d))
        else:
            add(OrientedFace(rest + (z,), d))
    return FaceSet(spec, faces, index)


def is_face(vertices, spec: ComplexSpec) -> bool:
    """Direct check of the defining congruence for a vertex multiset."""
    vs = [v % spec.n for v in vertices]
    if len(set(vs)) != len(vs) or len(vs) != spec.d + 1:
        return False
    total = sum(vs)
    return any((total - v + spec.c * v) % spec.n == 0 for v in vs)


def c_positions(vertices, spec: ComplexSpec) -> list[int]:
    vs = [v % spec.n for v in vertices]
    total = sum(vs)
    return [i for i, v in enumerate(vs) if (total - v + spec.c * v) % spec.n == 0]


def count_faces(spec: ComplexSpec) -> int:
    return len(build_complex(spec))


def expected_face_count(d: int, n: int, c: int) -> int:
    if c % n == 1:
        return comb(n - 1, d) // (d + 1)
    return comb(n - 1, d)


def cofacet_degrees(fs: FaceSet) -> Counter:
    """Number of d-faces containing each (d-1)-subset (absent ones omitted)."""
    deg: Counter = Counter()
    for f in fs.faces:
        key = f.key
        for i in range(len(key)):
            deg[key[:i] + key[i + 1 :]] += 1
    return deg


def cofacet_degree(fs: FaceSet, sigma) -> int:
    return cofacet_degrees(fs)[tuple(sorted(v % fs.spec.n for v in sigma))]


def max_cofacet_degree(fs: FaceSet) -> int:
    degs = cofacet_degrees(fs)
    return max(degs.values()) if degs else 0


def scale(u: int, vertices, n: int) -> tuple[int, ...]:
    return tuple(u * v % n for v in vertices)


def orbit_decomposition(fs: FaceSet) -> list[list[tuple[int, ...]]]:
    """Orbits of the faces under multiplication by F_n^*, as sorted keys."""
    n = fs.spec.n
    seen: set[tuple[int, ...]] = set()
    orbits = []
    for f in fs.faces:
        key = f.key
        if key in seen:
            continue
        orbit = sorted({tuple(sorted(scale(u, key, n))) for u in range(1, n)})
        missing = [o for o in orbit if o not in fs.index]
        if missing:
            raise AssertionError(f"complex not closed under scaling: {missing[0]}")
        seen.update(orbit)
        orbits.append(orbit)
    return orbits
