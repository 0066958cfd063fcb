"""Classification of X_{2,n,c}: predictions, kernel certificates, scans.

A complex is predicted non-acyclic when g = gcd((n-1)/o(c), (n-1)/2) > 1.
For any k >= 2 dividing g, the vector indexed by the row leaders with
entry 1 - w_k^(log x) lies in the left kernel of S(w_k).
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .boundary import block_indexing, boundary_matrix, build_S_polynomial
from .cyclolinalg import CycloNumber, cyclo_left_kernel_check, rational_rank
from .mcb import McbMatrix, divisor_nullities, evaluate
from .numtheory import divisors, euler_phi, factorize, is_prime, modulus
from .scomplex import check_eligible, eligible_cs

METHODS = ("fast", "exact", "both")
RECORD_HEADER = ["n", "c", "o_c", "log_c", "predicted", "codim", "hypertree", "witness_k"]
RATIO_HEADER = ["n", "A_n", "N_n", "E_n", "acyclic_ratio", "nonacyclic_ratio", "bound"]
RATIO_EXTRA = ["acyclic_ratio_unexplained"]


class MethodDisagreement(AssertionError):
    pass


@dataclass(frozen=True)
class ClassificationRecord:
    n: int
    c: int
    o_c: int
    log_c: int
    predicted_nonacyclic: bool
    fast_singular: bool
    witness_k: int | None
    codim: int
    is_hypertree: bool

    def __post_init__(self) -> None:
        if self.is_hypertree != (self.codim == 0) or self.is_hypertree == self.fast_singular:
            raise ValueError(f"inconsistent record {self}")

    def csv_row(self) -> list[str]:
        return [
            str(self.n),
            str(self.c),
            str(self.o_c),
            str(self.log_c),
            str(int(self.predicted_nonacyclic)),
            str(self.codim),
            str(int(self.is_hypertree)),
            "" if self.witness_k is None else str(self.witness_k),
        ]

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class KernelVector:
    n: int
    c: int
    k: int
    leaders: tuple[int, ...]
    coords: tuple[CycloNumber, ...]

    def verify(self, S: McbMatrix | None = None) -> bool:
        S = S if S is not None else build_S_polynomial(self.n, self.c)
        return cyclo_left_kernel_check(list(self.coords), evaluate(S, self.k).matrix)

    def is_nonzero(self) -> bool:
        return any(not x.is_zero() for x in self.coords)


def prediction_gcd(n: int, c: int) -> int:
    """gcd((n-1)/o(c), (n-1)/2)."""
    pm = modulus(n)
    return math.gcd((n - 1) // pm.order(c), (n - 1) // 2)


def predict_nonacyclic(n: int, c: int) -> bool:
    check_eligible(n, c)
    return prediction_gcd(n, c) > 1


def valid_ks(n: int, c: int) -> list[int]:
    """All k >= 2 dividing both (n-1)/o(c) and (n-1)/2."""
    return [k for k in divisors(prediction_gcd(n, c)) if k >= 2]


def _vector(n: int, c: int, k: int, zero_at: Iterable[int] = ()) -> KernelVector:
    pm = modulus(n)
    bi = block_indexing(n, c, pm)
    one = CycloNumber.one(k)
    zeroed = set(zero_at)
    coords = []
    for x in bi.row_leaders:
        if x in zeroed:
            coords.append(CycloNumber.zero(k))
        else:
            coords.append(one - CycloNumber.root_power(k, pm.log(x)))
    return KernelVector(n, c, k, bi.row_leaders, tuple(coords))


def kernel_vector(n: int, c: int, k: int) -> KernelVector:
    check_eligible(n, c)
    if k < 2 or prediction_gcd(n, c) % k:
        raise ValueError(f"k = {k} must be >= 2 and divide gcd((n-1)/o(c), (n-1)/2) = {prediction_gcd(n, c)}")
    return _vector(n, c, k)


def is_golden_c(n: int, c: int) -> bool:
    return (c * c + c - 1) % n == 0


def golden_cs(n: int) -> list[int]:
    return [c for c in eligible_cs(n) if is_golden_c(n, c)]


def golden_ratio_kernel(n: int, c: int) -> KernelVector:
    """Kernel vector for c^2 + c - 1 = 0 at k = (n-1)/2.

    The coordinate of the block containing the edge (1, -c-1) is zeroed;
    since -c-1 = -1/c, that leader is -c-1 or its inverse -c.
    """
    check_eligible(n, c)
    if not is_golden_c(n, c):
        raise ValueError(f"c = {c} does not satisfy c^2 + c - 1 = 0 mod {n}")
    return _vector(n, c, (n - 1) // 2, zero_at=((-c - 1) % n, (-c) % n))


def _fast(n: int, c: int, engine: str) -> tuple[int, int | None]:
    S = build_S_polynomial(n, c)
    nul = divisor_nullities(S, engine)
    codim = sum(euler_phi(k) * m for k, m in nul.items())
    witness = next((k for k, m in nul.items() if m), None)
    return codim, witness


def _exact(n: int, c: int) -> int:
    A = boundary_matrix(n, c)
    return A.n_cols - rational_rank(A.to_dense())


def classify(n: int, c: int, method: str = "fast", engine: str = "modular") -> ClassificationRecord:
    """Hypertree verdict for X_{2,n,c}.

    `fast` decides through S and the divisor evaluations; `exact` takes the
    rational rank of the boundary matrix; `both` runs the two and raises
    MethodDisagreement if they differ.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    check_eligible(n, c)
    pm = modulus(n)
    witness = None
    if method in ("fast", "both"):
        codim, witness = _fast(n, c, engine)
    if method in ("exact", "both"):
        codim_exact = _exact(n, c)
        if method == "both" and codim_exact != codim:
            raise MethodDisagreement(f"({n}, {c}): fast codim {codim} vs exact {codim_exact}")
        codim = codim_exact
    return ClassificationRecord(
        n=n,
        c=c,
        o_c=pm.order(c),
        log_c=pm.log(c),
        predicted_nonacyclic=prediction_gcd(n, c) > 1,
        fast_singular=codim > 0,
        witness_k=witness,
        codim=codim,
        is_hypertree=codim == 0,
    )


def primes_in(lo: int, hi: int) -> list[int]:
    return [p for p in range(max(lo, 11), hi + 1) if is_prime(p)]


def _classify_task(args: tuple[int, int, str]) -> ClassificationRecord:
    n, c, method = args
    return classify(n, c, method)


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("HYPERPATH_JOBS", "1")))
    except ValueError:
        return 1


def scan(primes: Sequence[int], method: str = "fast", jobs: int | None = None) -> list[ClassificationRecord]:
    """Classify every eligible c for each prime; results in (n, c) order."""
    tasks = [(n, c, method) for n in sorted(primes) for c in eligible_cs(n)]
    jobs = jobs or default_jobs()
    if jobs <= 1 or len(tasks) < 2:
        return [_classify_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_classify_task, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))


def records_to_csv(records: Iterable[ClassificationRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_HEADER)
    for rec in records:
        w.writerow(rec.csv_row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[ClassificationRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != RECORD_HEADER:
        raise ValueError(f"expected header {','.join(RECORD_HEADER)}")
    out = []
    for row in rows[1:]:
        n, c, o_c, log_c, pred, codim, ht, wk = row
        out.append(
            ClassificationRecord(
                n=int(n),
                c=int(c),
                o_c=int(o_c),
                log_c=int(log_c),
                predicted_nonacyclic=pred == "1",
                fast_singular=ht == "0",
                witness_k=int(wk) if wk else None,
                codim=int(codim),
                is_hypertree=ht == "1",
            )
        )
    return out


# ---------------------------------------------------------------- ratios


@dataclass(frozen=True)
class RatioRow:
    n: int
    A_n: int
    N_n: int
    E_n: int

    @property
    def acyclic_ratio(self) -> Fraction:
        return Fraction(self.A_n, self.n - 4)

    @property
    def nonacyclic_ratio(self) -> Fraction | None:
        return Fraction(self.N_n, self.E_n) if self.E_n else None

    @property
    def acyclic_ratio_unexplained(self) -> Fraction | None:
        """A_n over the eligible c not covered by the prediction."""
        rest = self.n - 4 - self.E_n
        return Fraction(self.A_n, rest) if rest else None

    @property
    def bound(self) -> Fraction:
        return ratio_bound(self.n)


def ratio_bound(n: int) -> Fraction:
    h = (n - 1) // 2
    return Fraction(euler_phi(h), h)


def ratio_rows(records: Iterable[ClassificationRecord]) -> list[RatioRow]:
    by_n: dict[int, list[ClassificationRecord]] = {}
    for rec in records:
        by_n.setdefault(rec.n, []).append(rec)
    rows = []
    for n in sorted(by_n):
        recs = by_n[n]
        a = sum(r.is_hypertree for r in recs)
        e = sum(r.predicted_nonacyclic for r in recs)
        rows.append(RatioRow(n, a, len(recs) - a, e))
    return rows


def acyclic_ratio(n: int, records: Iterable[ClassificationRecord] | None = None) -> Fraction:
    recs = list(records) if records is not None else scan([n])
    (row,) = [r for r in ratio_rows(recs) if r.n == n]
    return row.acyclic_ratio


def totient_identity_holds(n: int) -> bool:
    h = (n - 1) // 2
    if n % 4 == 1:
        return euler_phi(n - 1) == 2 * euler_phi(h)
    return euler_phi(n - 1) == euler_phi(h)


def decimal6(q: Fraction | None) -> str:
    if q is None:
        return ""
    if q < 0:
        raise ValueError("ratios are non-negative")
    v = round(q * 10**6)
    return f"{v // 10**6}.{v % 10**6:06d}"


def ratios_to_csv(rows: Iterable[RatioRow], extended: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RATIO_HEADER + (RATIO_EXTRA if extended else []))
    for r in rows:
        out = [
            str(r.n),
            str(r.A_n),
            str(r.N_n),
            str(r.E_n),
            decimal6(r.acyclic_ratio),
            decimal6(r.nonacyclic_ratio),
            decimal6(r.bound),
        ]
        if extended:
            out.append(decimal6(r.acyclic_ratio_unexplained))
        w.writerow(out)
    return buf.getvalue()


def ratios_from_csv(text: str) -> list[RatioRow]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][: len(RATIO_HEADER)] != RATIO_HEADER:
        raise ValueError(f"expected header {','.join(RATIO_HEADER)}")
    return [RatioRow(int(r[0]), int(r[1]), int(r[2]), int(r[3])) for r in rows[1:]]


# ---------------------------------------------------------------- table data


def table_csv(records: Iterable[ClassificationRecord], n_min: int, n_max: int) -> str:
    """Matrix layout: one row per c, one column per prime n.

    Cells hold 0 for a hypertree, the codimension otherwise, and X where c
    is not eligible for n (including c >= n).
    """
    primes = primes_in(n_min, n_max)
    cell = {(r.n, r.c): r.codim for r in records}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["c"] + [str(n) for n in primes])
    for c in range(0, max(primes)):
        w.writerow([str(c)] + [str(cell[(n, c)]) if (n, c) in cell else "X" for n in primes])
    return buf.getvalue()


def ratios_svg(rows: Sequence[RatioRow], width: int = 720, height: int = 360) -> str:
    """Scatter of acyclic ratio against n with the bound as a second series."""
    pad = 40
    if not rows:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}"></svg>\n'
    lo, hi = rows[0].n, rows[-1].n
    span = max(hi - lo, 1)

    def px(n: int) -> float:
        return pad + (width - 2 * pad) * (n - lo) / span

    def py(v: Fraction) -> float:
        return height - pad - (height - 2 * pad) * float(v)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.0f}" y="{height - 8}" font-size="12" text-anchor="middle">n</text>',
        f'<text x="{pad}" y="{pad - 10}" font-size="12">acyclic ratio (dots) and bound (crosses)</text>',
    ]
    for r in rows:
        x, yb = px(r.n), py(r.bound)
        parts.append(f'<circle cx="{x:.2f}" cy="{py(r.acyclic_ratio):.2f}" r="2" fill="steelblue"/>')
        parts.append(f'<path d="M{x - 2:.2f},{yb - 2:.2f}L{x + 2:.2f},{yb + 2:.2f}M{x - 2:.2f},{yb + 2:.2f}L{x + 2:.2f},{yb - 2:.2f}" stroke="firebrick"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def smallest_valid_k(n: int, c: int) -> int | None:
    g = prediction_gcd(n, c)
    return factorize(g)[0][0] if g > 1 else None
