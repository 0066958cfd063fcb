"""Command-line front end.

Exit codes: 0 success, 1 failed check or internal error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis, fullmatrix
from .analysis import METHODS, MethodDisagreement
from .scomplex import ineligibility_reason

SCAN_DEFAULT_CEILING = 499
SCAN_HARD_CEILING = 1500
DEFAULT_SEED = 20240229
BENCH_DENSE_BYTES = 1 << 30  # skip dense baselines whose int64 matrix exceeds 1 GiB
DATA_DIR = Path(__file__).with_name("data")


class UsageError(Exception):
    pass


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _check_nc(n: int, c: int) -> None:
    reason = ineligibility_reason(n, c)
    if reason:
        raise UsageError(f"(n, c) = ({n}, {c}) is not eligible: {reason}")


def _check_range(lo: int, hi: int, allow_large: bool) -> None:
    if lo < 11:
        raise UsageError(f"--min must be >= 11, got {lo}")
    if hi < lo:
        raise UsageError(f"--max {hi} is below --min {lo}")
    if hi > SCAN_HARD_CEILING:
        raise UsageError(f"--max {hi} exceeds the hard ceiling {SCAN_HARD_CEILING}")
    if hi > SCAN_DEFAULT_CEILING and not allow_large:
        raise UsageError(f"--max {hi} exceeds {SCAN_DEFAULT_CEILING}; pass --allow-large to allow it")


def cmd_classify(args) -> int:
    _check_nc(args.n, args.c)
    try:
        rec = analysis.classify(args.n, args.c, args.method)
    except MethodDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(rec.to_json(), sort_keys=True))
    return 0


def _scan(args) -> list:
    _check_range(args.min, args.max, getattr(args, "allow_large", False))
    return analysis.scan(analysis.primes_in(args.min, args.max), method=args.method, jobs=args.jobs)


def cmd_scan(args) -> int:
    recs = _scan(args)
    if args.format == "json":
        text = "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in recs)
    else:
        text = analysis.records_to_csv(recs)
    _write(text, args.out)
    return 0


def cmd_table(args) -> int:
    recs = _scan(args)
    _write(analysis.table_csv(recs, args.min, args.max), args.out)
    if args.records:
        Path(args.records).write_text(analysis.records_to_csv(recs), encoding="utf-8")
    return 0


def cmd_ratios(args) -> int:
    recs = _scan(args)
    rows = analysis.ratio_rows(recs)
    if args.format == "json":
        text = "".join(
            json.dumps(
                {
                    "n": r.n,
                    "A_n": r.A_n,
                    "N_n": r.N_n,
                    "E_n": r.E_n,
                    "acyclic_ratio": analysis.decimal6(r.acyclic_ratio),
                    "acyclic_ratio_unexplained": analysis.decimal6(r.acyclic_ratio_unexplained),
                    "nonacyclic_ratio": analysis.decimal6(r.nonacyclic_ratio),
                    "bound": analysis.decimal6(r.bound),
                }
            )
            + "\n"
            for r in rows
        )
    else:
        text = analysis.ratios_to_csv(rows, extended=args.extended)
    _write(text, args.out)
    if args.svg:
        Path(args.svg).write_text(analysis.ratios_svg(rows), encoding="utf-8")
    return 0


def cmd_verify_kernel(args) -> int:
    _check_nc(args.n, args.c)
    results = []
    if args.k is not None:
        ks = [args.k]
        if args.k < 2 or analysis.prediction_gcd(args.n, args.c) % args.k:
            raise UsageError(f"k = {args.k} must be >= 2 and divide gcd((n-1)/o(c), (n-1)/2) = {analysis.prediction_gcd(args.n, args.c)}")
    else:
        ks = analysis.valid_ks(args.n, args.c)
    for k in ks:
        v = analysis.kernel_vector(args.n, args.c, k)
        results.append({"kind": "gcd", "k": k, "verified": v.verify()})
    if analysis.is_golden_c(args.n, args.c):
        v = analysis.golden_ratio_kernel(args.n, args.c)
        results.append({"kind": "golden", "k": v.k, "verified": v.verify()})
    print(json.dumps({"n": args.n, "c": args.c, "certificates": results}, sort_keys=True))
    if not results:
        print("no kernel certificate applies to this (n, c)", file=sys.stderr)
        return 1
    return 0 if all(r["verified"] for r in results) else 1


def cmd_fullrank(args) -> int:
    _check_nc(args.n, args.c)
    rec = fullmatrix.full_rank_record(args.n, args.c)
    _write(fullmatrix.full_records_to_csv([rec]), args.out)
    return 0 if rec.implication_holds else 1


def _median_ms(fn, reps: int) -> tuple[float, object]:
    times, out = [], None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        times.append((time.perf_counter() - t0) * 1000)
    return statistics.median(times), out


def bench_rows(n_list, reps: int, c: int | None = None, dense_limit: int = BENCH_DENSE_BYTES):
    """Yield (n, method, median_ms or None, singular) for each prime n."""
    from math import comb

    from .boundary import boundary_matrix, build_S_polynomial
    from .cyclolinalg import rank_mod_p, rational_rank
    from .mcb import is_singular_fast

    p = 2**31 - 1
    for n in n_list:
        cc = c if c is not None else 2
        _check_nc(n, cc)
        ms, (sing, _) = _median_ms(lambda: is_singular_fast(build_S_polynomial(n, cc)), reps)
        yield n, "fast", ms, sing
        if comb(n, 2) * comb(n - 1, 2) * 8 > dense_limit:
            yield n, "exact", None, None
            yield n, "modp", None, None
            continue
        A = boundary_matrix(n, cc).to_dense()
        ms, rank = _median_ms(lambda: rational_rank(A), reps)
        yield n, "exact", ms, rank < A.shape[1]
        ms, rank = _median_ms(lambda: rank_mod_p(A, p), reps)
        yield n, "modp", ms, rank < A.shape[1]


def cmd_bench(args) -> int:
    try:
        n_list = [int(v) for v in args.n_list.split(",") if v]
    except ValueError:
        raise UsageError(f"--n-list must be comma-separated integers, got {args.n_list!r}")
    lines = ["n,method,median_ms"]
    verdicts: dict[int, set] = {}
    for n, method, ms, sing in bench_rows(n_list, args.reps, args.c):
        lines.append(f"{n},{method},{'' if ms is None else f'{ms:.1f}'}")
        if sing is not None:
            verdicts.setdefault(n, set()).add(bool(sing))
    _write("\n".join(lines) + "\n", args.out)
    bad = [n for n, v in verdicts.items() if len(v) > 1]
    if bad:
        print(f"error: methods disagree on the verdict for n in {bad}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------- selftest


def _running_example_checks(data_dir: Path):
    """Yield (description, thunk) pairs for the n = 13, c = 5 facts."""
    from .boundary import build_S_polynomial, s_from_json
    from .mcb import evaluate
    from .numtheory import modulus
    from .scomplex import ComplexSpec, build_complex, cofacet_degree, orbit_decomposition

    spec = ComplexSpec(2, 13, 5)
    fs = build_complex(spec)
    S = build_S_polynomial(13, 5)
    pm = modulus(13)
    xs = [1, 2, 4, 8, 3, 6, 12, 11, 9, 5, 10, 7]
    orders = [1, 12, 6, 4, 3, 12, 2, 12, 3, 4, 6, 12]

    def golden_S() -> bool:
        path = data_dir / "S_13_5.json"
        try:
            n, c, G = s_from_json(path.read_text(encoding="utf-8"))
        except Exception as exc:  # unreadable or malformed
            raise AssertionError(f"golden file {path} is unreadable: {exc}") from exc
        if (n, c) != (13, 5) or G != S:
            raise AssertionError(f"golden file {path} does not match the computed S")
        return True

    yield "X_{2,13,5} has 66 faces", lambda: len(fs) == 66
    yield "{0,1,5}, {2,3,12}, {2,9,3} are faces", lambda: all(f in fs for f in [(0, 1, 5), (2, 3, 12), (2, 9, 3)])
    yield "edge {1,5} lies in 3 faces, {1,4} in 2", lambda: cofacet_degree(fs, (1, 5)) == 3 and cofacet_degree(fs, (1, 4)) == 2
    yield "orbits: five of size 12, one of size 6", lambda: sorted(map(len, orbit_decomposition(fs))) == [6] + [12] * 5
    yield "lambda = 2 and the log/order table of F_13", lambda: pm.lam == 2 and [pm.log(x) for x in xs] == list(range(12)) and [pm.order(x) for x in xs] == orders
    yield "S is 60 x 60 with 5 x 5 blocks of size 12", lambda: S.dense().shape == (60, 60) and (S.t, S.r) == (5, 12)
    yield "B[3,4] = P^2", lambda: list(S.coeffs[3, 0]) == [0, 0, 1] + [0] * 9
    yield "block at row (1,2), column (1,3,7) is P^11", lambda: list(S.coeffs[0, 2]) == [0] * 11 + [1]
    yield "S block table matches the golden file", golden_S
    yield "v_{13,3} annihilates S(w_3)", lambda: analysis.kernel_vector(13, 5, 3).verify(S)
    yield "S(w_3) is singular", lambda: evaluate(S, 3).nullity() > 0
    yield "(13,5) is not a hypertree", lambda: not analysis.classify(13, 5).is_hypertree


def _random_mcb_checks(count: int, seed: int):
    from .cyclolinalg import rank_bareiss
    from .mcb import codimension, is_singular_fast, random_mcb

    rng = random.Random(seed)
    for i in range(count):
        r, t = rng.randint(2, 12), rng.randint(1, 6)
        E = random_mcb(rng, r, t, density=rng.choice([0.3, 0.6, 1.0]))

        def check(E=E, r=r, t=t) -> bool:
            deficiency = r * t - rank_bareiss(E.dense().tolist())
            return is_singular_fast(E)[0] == (deficiency > 0) and codimension(E) == deficiency

        yield f"random MCB #{i} (r={r}, t={t}) agrees with the dense rank", check


def run_selftest(verbose: bool = False, count: int = 50, seed: int = DEFAULT_SEED, data_dir: Path = DATA_DIR, out=None) -> int:
    out = out or sys.stdout
    checks = list(_running_example_checks(data_dir)) + list(_random_mcb_checks(count, seed))
    for desc, fn in checks:
        try:
            ok = bool(fn())
            msg = ""
        except AssertionError as exc:
            ok, msg = False, str(exc)
        if not ok:
            print(f"FAIL: {desc}" + (f" ({msg})" if msg else ""), file=out)
            return 1
        if verbose:
            print(f"ok: {desc}", file=out)
    print(f"selftest passed ({len(checks)} checks)", file=out)
    return 0


def cmd_selftest(args) -> int:
    return run_selftest(args.verbose, args.count, args.seed, Path(args.data_dir))


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    jobs_default = analysis.default_jobs()
    p = argparse.ArgumentParser(prog="hyperpath", description="Hypertree classification of the complexes X_{2,n,c}.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="classify one (n, c) and print a JSON record")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--method", choices=METHODS, default="fast", help="fast: via S; exact: rank of A; both: compare (default fast)")
    s.set_defaults(func=cmd_classify)

    def ranged(sp, lo: int, hi: int, method: str) -> None:
        sp.add_argument("--min", type=int, default=lo, help=f"smallest prime (default {lo})")
        sp.add_argument("--max", type=int, default=hi, help=f"largest prime (default {hi})")
        sp.add_argument("--jobs", type=int, default=jobs_default, help="worker processes (default $HYPERPATH_JOBS or 1)")
        sp.add_argument("--method", choices=METHODS, default=method, help=f"classification method (default {method})")
        sp.add_argument("--allow-large", action="store_true", help=f"allow --max above {SCAN_DEFAULT_CEILING}")
        sp.add_argument("--out", help="output file (default stdout)")

    s = sub.add_parser("scan", help="classification records as CSV or JSON lines")
    ranged(s, 11, 59, "fast")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("table", help="c-by-n matrix of codimensions (X = ineligible)")
    ranged(s, 11, 59, "exact")
    s.add_argument("--records", help="also write the per-(n, c) record CSV here")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("ratios", help="per-prime acyclic ratios and the bound")
    ranged(s, 11, 59, "fast")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--extended", action="store_true", help="append acyclic_ratio_unexplained = A_n/(n-4-E_n)")
    s.add_argument("--svg", help="write a scatter plot here")
    s.set_defaults(func=cmd_ratios)

    s = sub.add_parser("verify-kernel", help="check the explicit left-kernel vectors exactly")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--k", type=int, help="conductor (default: every valid k)")
    s.set_defaults(func=cmd_verify_kernel)

    s = sub.add_parser("fullrank", help="rank of the full matrix F and the sufficiency check")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fullrank)

    s = sub.add_parser("bench", help="time the fast decision against dense baselines")
    s.add_argument("--n-list", default="13,59,101", help="comma-separated primes (default 13,59,101)")
    s.add_argument("--reps", type=int, default=3)
    s.add_argument("--c", type=int, help="c used for every n (default 2)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("selftest", help="running-example facts and random MCB oracle agreement")
    s.add_argument("--verbose", action="store_true")
    s.add_argument("--count", type=int, default=50, help="random MCB instances (default 50)")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--data-dir", default=str(DATA_DIR), help="directory holding the golden files")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report and signal internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
