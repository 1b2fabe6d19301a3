"""``poscert`` command line.

Exit codes: 0 for the certified side (no positive root, no real root,
unsatisfiable with certificate), 1 for the other side (root exists,
satisfiable, no certificate found up to the bound), 2 for bad input or
resource errors. JSON output writes every rational as an exact "p/q"
string.
"""

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import kernels
from .certificate import (
    NO_POSITIVE_ROOT,
    NO_REAL_ROOT,
    DecisionConfig,
    PositivityCertificate,
    decide_positive_root,
    decide_real_root,
    default_degree_cap,
    sign_change_witness,
)
from .cofactor import build_cofactor, cofactor_run
from .errors import PoscertError
from .oracle import has_positive_real_root, has_real_root
from .poly import (
    UniPoly,
    as_rational,
    format_list,
    format_mpoly_terms,
    format_poly,
    parse_mpoly,
    parse_poly,
    rational_str,
    sign_changes,
)
from . import sat

EXIT_CERTIFIED = 0
EXIT_OTHER = 1
EXIT_ERROR = 2

STANDARD_RATIOS = (1, 2, 3, 4, 6, 8, 9, 12, 13, 15, 19, 20, 30, 34, 36, 40, 41, 49, 50, 51, 100, 200, 1000, 10000)


class UsageError(PoscertError):
    pass


@dataclass
class RunReport:
    command: str
    input_digest: str
    verdict: str
    certificate: Optional[dict] = None
    oracle: Optional[str] = None
    timings_ms: Dict[str, float] = field(default_factory=dict)
    reached: Optional[int] = None  # largest D (or d) attempted
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "input_digest": self.input_digest,
            "verdict": self.verdict,
            "certificate": self.certificate,
            "oracle_verdict": self.oracle,
            "timings_ms": {k: round(v, 3) for k, v in self.timings_ms.items()},
            "reached": self.reached,
        }
        out.update(self.extra)
        return out


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _coeff_list(p: UniPoly) -> List[str]:
    return [rational_str(c) for c in p.coeffs]


def certificate_json(cert: PositivityCertificate) -> dict:
    return {"P": _coeff_list(cert.P), "T": _coeff_list(cert.T), "V": _coeff_list(cert.V), "D": cert.D}


def certificate_from_json(data: dict) -> PositivityCertificate:
    p, t, v = (UniPoly(as_rational(c) for c in data[k]) for k in ("P", "T", "V"))
    return PositivityCertificate(p, t, v, int(data["D"]))


def unsat_certificate_json(cert: sat.UnsatCertificate) -> dict:
    return {
        "d": cert.degree_bound_used,
        "band": cert.band,
        "K": format_mpoly_terms(cert.K),
        "K_i": [format_mpoly_terms(k) for k in cert.K_i],
        "P": format_mpoly_terms(cert.P),
    }


def unsat_certificate_from_json(data: dict, u: int) -> sat.UnsatCertificate:
    return sat.UnsatCertificate(
        parse_mpoly(data["K"], u),
        tuple(parse_mpoly(k, u) for k in data["K_i"]),
        parse_mpoly(data["P"], u),
        int(data["d"]),
        data.get("band", sat.DENSE),
    )


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def _emit(report: RunReport, as_json: bool, lines: Sequence[str], out):
    if as_json:
        print(json.dumps(report.to_json(), indent=2), file=out)
    else:
        for line in lines:
            print(line, file=out)


def _poly_arg(text: str) -> UniPoly:
    """Inline polynomial text, or the path of a file holding one."""
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read()
    p = parse_poly(text)
    if p.is_zero():
        raise UsageError("the zero polynomial has every number as a root")
    return p


def _config(args) -> DecisionConfig:
    cap = args.max_degree if args.max_degree is not None else default_degree_cap()
    return DecisionConfig(degree_cap=cap, use_oracle_crosscheck=not args.no_oracle)


# ------------------------------------------------------------------ commands


def run_check(args, out=sys.stdout) -> int:
    p = _poly_arg(args.poly)
    if args.real:
        return _run_realroot(args, p, out)
    t0 = time.perf_counter()
    dec = decide_positive_root(p, _config(args))
    timings = {"decide": _ms(t0)}
    oracle = None
    if dec.oracle_has_positive_root is not None:
        oracle = "positive_root_exists" if dec.oracle_has_positive_root else "no_positive_root"
    report = RunReport(
        "check", digest(format_list(p)), dec.verdict,
        certificate_json(dec.certificate) if dec.certificate else None,
        oracle, timings, dec.max_D,
        {"D_used": dec.D_used, "bounded_search": dec.bounded_search, "degree_bound": dec.degree_bound,
         "x_power": dec.x_power, "attempts": [[a.D, a.feasible, a.proof] for a in dec.attempts]},
    )
    lines = [f"P = {format_poly(p)}", f"verdict: {dec.verdict}"]
    if dec.certificate:
        lines.append(f"certificate: D = {dec.certificate.D}, T = {format_poly(dec.certificate.T)}")
    elif dec.verdict == NO_POSITIVE_ROOT:
        lines.append("no certificate found within the search ceiling (verdict from the Sturm oracle)")
    if dec.bounded_search:
        lines.append(f"bounded search: stopped at D = {dec.max_D}, degree bound {dec.degree_bound}")
    if oracle:
        lines.append(f"oracle: {oracle}")
    _emit(report, args.json, lines, out)
    return EXIT_CERTIFIED if dec.verdict == NO_POSITIVE_ROOT else EXIT_OTHER


def _run_realroot(args, p: UniPoly, out) -> int:
    t0 = time.perf_counter()
    dec = decide_real_root(p, _config(args))
    timings = {"decide": _ms(t0)}
    oracle = None
    if not args.no_oracle:
        t1 = time.perf_counter()
        oracle = "has_real_root" if has_real_root(p) else "no_real_root"
        timings["oracle"] = _ms(t1)
    certs = None
    if dec.verdict == NO_REAL_ROOT and dec.positive.certificate and dec.negative.certificate:
        certs = {"positive": certificate_json(dec.positive.certificate),
                 "negative": certificate_json(dec.negative.certificate)}
    report = RunReport("realroot", digest(format_list(p)), dec.verdict, certs, oracle, timings,
                       max(dec.positive.max_D, dec.negative.max_D), {"root_at_zero": dec.root_at_zero})
    lines = [f"P = {format_poly(p)}", f"verdict: {dec.verdict}"]
    if certs:
        lines.append(f"P(X) certificate D = {dec.positive.certificate.D}, "
                     f"P(-X) certificate D = {dec.negative.certificate.D}")
    if oracle:
        lines.append(f"oracle: {oracle}")
    _emit(report, args.json, lines, out)
    return EXIT_CERTIFIED if dec.verdict == NO_REAL_ROOT else EXIT_OTHER


def run_realroot(args, out=sys.stdout) -> int:
    p = _poly_arg(args.poly)
    return _run_realroot(args, p, out)


def _parse_ratios(text: Optional[str]) -> List:
    if text is None:
        return list(STANDARD_RATIOS)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            h = as_rational(tok)
        except PoscertError:
            raise UsageError(f"bad ratio {tok!r}")
        if h <= 0:
            raise UsageError(f"ratio must be positive, got {tok}")
        out.append(h)
    if not out:
        raise UsageError("no ratios given")
    return out


def run_ratio_table(args, out=sys.stdout) -> int:
    rows = []
    for h in _parse_ratios(args.ratios):
        run = cofactor_run(h)
        rows.append((rational_str(h), run.negative_index, run.pi_estimate))
    if args.format == "json":
        print(json.dumps([{"h": h, "index": i, "ratio": f"{i}/{h}", "estimate": r} for h, i, r in rows],
                         indent=2), file=out)
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["h", "index", "index_over_h"])
        for h, i, r in rows:
            w.writerow([h, i, f"{r:.6f}"])
    else:
        print(f"{'p/q':>10}  {'i':>9}  {'i/(p/q)':>9}", file=out)
        for h, i, r in rows:
            print(f"{h:>10}  {i:>9}  {r:>9.5f}", file=out)
    return EXIT_CERTIFIED


def run_cofactor(args, out=sys.stdout) -> int:
    p, q = as_rational(args.p), as_rational(args.q)
    t0 = time.perf_counter()
    r, product = build_cofactor(p, q)
    elapsed = _ms(t0)
    quad = UniPoly([p * p + q * q, -2 * p, 1])
    if args.json:
        data = {"p": rational_str(p), "q": rational_str(q), "quadratic": _coeff_list(quad),
                "R": _coeff_list(r), "product": _coeff_list(product), "degree": r.degree,
                "timings_ms": {"build": round(elapsed, 3)}}
        print(json.dumps(data, indent=2), file=out)
    else:
        print(f"quadratic: {format_poly(quad)}", file=out)
        print(f"R (degree {r.degree}): {format_poly(r)}", file=out)
        print(f"product: {format_poly(product)}", file=out)
    return EXIT_CERTIFIED


def run_witness(args, out=sys.stdout) -> int:
    base = parse_poly(args.base)
    roots = [as_rational(t.strip()) for t in args.roots.split(",") if t.strip()]
    u, w = sign_change_witness(base, roots)
    changes = sign_changes(w)
    if args.json:
        data = {"base": _coeff_list(base), "roots": [rational_str(a) for a in roots],
                "U": _coeff_list(u), "W": _coeff_list(w), "sign_changes": changes}
        print(json.dumps(data, indent=2), file=out)
    else:
        print(f"U = {format_poly(u)}", file=out)
        print(f"W = {format_poly(w)}", file=out)
        print(f"sign changes: {changes} (roots: {len(roots)})", file=out)
    return EXIT_CERTIFIED


def _read_cnf(path: str) -> sat.CnfFormula:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    return sat.parse_dimacs(text)


def run_sat(args, out=sys.stdout) -> int:
    f = _read_cnf(args.file)
    dig = digest(sat.format_dimacs(f))
    if args.sat_command == "encode":
        t0 = time.perf_counter()
        q = sat.encode(f)
        report = RunReport("sat encode", dig, "encoded", None, None, {"encode": _ms(t0)},
                           extra={"u": f.u, "Q": format_mpoly_terms(q)})
        _emit(report, args.json, [f"u = {f.u}, {len(f.clauses)} clauses, {len(q)} terms",
                                  json.dumps(format_mpoly_terms(q))], out)
        return EXIT_CERTIFIED
    if args.sat_command == "brute":
        t0 = time.perf_counter()
        res = sat.brute_force_sat(f)
        verdict = "sat" if res.sat else "unsat"
        extra = {"assignment": list(res.assignment) if res.sat else None}
        report = RunReport("sat brute", dig, verdict, None, None, {"brute": _ms(t0)}, extra=extra)
        lines = [verdict]
        if res.sat:
            lines.append(" ".join(str(v if val else -v) for v, val in enumerate(res.assignment, 1)))
        _emit(report, args.json, lines, out)
        return EXIT_OTHER if res.sat else EXIT_CERTIFIED
    # cert
    t0 = time.perf_counter()
    runs = sat.search_unsat_certificate(f, args.max_d, band=args.band, method=args.method,
                                        use_evaluation_hint=args.hint)
    timings = {"search": _ms(t0)}
    found = runs[-1].certificate
    oracle = None
    if f.u <= sat.MAX_BRUTE_VARS:
        t1 = time.perf_counter()
        oracle = "sat" if sat.brute_force_sat(f).sat else "unsat"
        timings["brute"] = _ms(t1)
    verdict = "unsat" if found else f"no certificate up to d = {runs[-1].d}"
    report = RunReport("sat cert", dig, "unsat" if found else "no_certificate",
                       unsat_certificate_json(found) if found else None, oracle, timings, runs[-1].d,
                       {"attempts": [[r.d, r.num_unknowns, r.num_constraints, r.proof] for r in runs]})
    lines = [verdict]
    if found:
        lines.append(json.dumps(unsat_certificate_json(found)))
    if oracle:
        lines.append(f"brute force: {oracle}")
    _emit(report, args.json, lines, out)
    return EXIT_CERTIFIED if found else EXIT_OTHER


# --------------------------------------------------------------------- bench


def _parse_range(text: str):
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise UsageError(f"range must look like a..b, got {text!r}")
    if lo < 1 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return lo, hi


def bench_inputs(degrees, coeff_range: int, count: int, seed: int) -> List[List[int]]:
    """Deterministic sample: degree uniform in range, nonzero leading coefficient."""
    rng = random.Random(seed)
    lo, hi = degrees
    out = []
    for _ in range(count):
        n = rng.randint(lo, hi)
        cs = [rng.randint(-coeff_range, coeff_range) for _ in range(n)]
        lead = 0
        while lead == 0:
            lead = rng.randint(-coeff_range, coeff_range)
        out.append(cs + [lead])
    return out


def bench_one(task):
    coeffs, cap = task
    p = UniPoly(coeffs)
    t0 = time.perf_counter()
    dec = decide_positive_root(p, DecisionConfig(degree_cap=cap, use_oracle_crosscheck=False))
    t_dec = _ms(t0)
    t1 = time.perf_counter()
    oracle = has_positive_real_root(p)
    t_oracle = _ms(t1)
    agrees = (dec.verdict == NO_POSITIVE_ROOT) != oracle
    return {
        "degree": p.degree,
        "coeffs": format_list(p),
        "verdict": dec.verdict,
        "D_used": "" if dec.D_used is None else dec.D_used,
        "max_D": dec.max_D,
        "bounded_search": int(dec.bounded_search),
        "oracle_positive_root": int(oracle),
        "agrees": int(agrees),
        "decision_ms": f"{t_dec:.3f}",
        "oracle_ms": f"{t_oracle:.3f}",
    }


BENCH_FIELDS = ["index", "degree", "coeff_range", "coeffs", "verdict", "D_used", "max_D",
                "bounded_search", "oracle_positive_root", "agrees", "decision_ms", "oracle_ms"]


def run_bench(args, out=sys.stdout) -> int:
    degrees = _parse_range(args.degrees)
    if args.coeff_range < 1 or args.count < 1 or args.workers < 1:
        raise UsageError("coeff-range, count and workers must be >= 1")
    cap = args.max_degree if args.max_degree is not None else default_degree_cap()
    tasks = [(cs, cap) for cs in bench_inputs(degrees, args.coeff_range, args.count, args.seed)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(bench_one, tasks))  # map keeps input order
    else:
        rows = [bench_one(t) for t in tasks]
    fields = [f for f in BENCH_FIELDS if not (args.no_timings and f.endswith("_ms"))]
    w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for i, row in enumerate(rows):
        w.writerow(dict(row, index=i, coeff_range=args.coeff_range))
    return EXIT_CERTIFIED


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="poscert", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"poscert 0.1.0 ({kernels.BACKEND} kernels)")
    sub = ap.add_subparsers(dest="command", required=True)

    def decision_flags(p):
        p.add_argument("poly", help='polynomial text such as "x^2 + 1" or "[1, 0, 1]" (ascending), or a file holding it')
        p.add_argument("--max-degree", type=int, default=None,
                       help="degree cap for the multiplier search (default: $POSCERT_DEGREE_CAP or 64)")
        p.add_argument("--no-oracle", action="store_true", help="skip the Sturm cross-check")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("check", help="decide whether P has a positive real root")
    decision_flags(p)
    p.add_argument("--real", action="store_true", help="decide any real root instead")
    p.set_defaults(func=run_check)

    p = sub.add_parser("realroot", help="decide whether P has a real root")
    decision_flags(p)
    p.set_defaults(func=run_realroot)

    p = sub.add_parser("table1", help="first non-positive cofactor index for a list of ratios p/q")
    p.add_argument("--ratios", default=None, help="comma-separated ratios (default: the 24 standard ones)")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.set_defaults(func=run_ratio_table)

    p = sub.add_parser("cofactor", help="positive cofactor of (X - p)^2 + q^2")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=run_cofactor)

    p = sub.add_parser("witness", help="multiplier with exactly k sign changes for k positive roots")
    p.add_argument("--base", required=True, help="polynomial with positive coefficients")
    p.add_argument("--roots", required=True, help="comma-separated positive rationals")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=run_witness)

    p = sub.add_parser("sat", help="3-SAT encoding, brute force and certificates")
    ss = p.add_subparsers(dest="sat_command", required=True)
    for name, helptext in (("encode", "print the polynomial Q"), ("brute", "exhaustive satisfiability"),
                           ("cert", "search for an unsatisfiability certificate")):
        sp = ss.add_parser(name, help=helptext)
        sp.add_argument("file", help="DIMACS CNF file")
        sp.add_argument("--json", action="store_true")
        if name == "cert":
            sp.add_argument("--max-d", type=int, default=10, help="largest total degree tried (default 10)")
            sp.add_argument("--band", choices=sat.BANDS, default=sat.DENSE,
                            help="monomials P must contain: all up to degree d+4 (dense) or the constant term")
            sp.add_argument("--method", choices=("auto", "simplex", "guided"), default="auto")
            sp.add_argument("--hint", action="store_true",
                            help="try a satisfying grid point as an infeasibility witness first")
    p.set_defaults(func=run_sat)

    p = sub.add_parser("bench", help="CSV timings over random polynomials")
    p.add_argument("--degrees", default="2..6", help="degree range a..b")
    p.add_argument("--coeff-range", type=int, default=10)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timings", action="store_true", help="omit timing columns (byte-stable output)")
    p.set_defaults(func=run_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    if getattr(args, "max_d", 0) is not None and getattr(args, "max_d", 0) < 0:
        print("poscert: --max-d must be >= 0", file=err)
        return EXIT_ERROR
    if getattr(args, "max_degree", None) is not None and args.max_degree < 0:
        print("poscert: --max-degree must be >= 0", file=err)
        return EXIT_ERROR
    try:
        return args.func(args, out)
    except (PoscertError, ValueError, ZeroDivisionError) as exc:
        print(f"poscert: {exc}", file=err)
        return EXIT_ERROR


def run_capture(argv: Sequence[str]):
    """(exit code, stdout, stderr) of one invocation; used by tests."""
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
