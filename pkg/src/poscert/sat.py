"""3-SAT as polynomial root existence, and LP-searched unsatisfiability certificates.

Coding: true -> 2, false -> 1. A clause becomes prod (X_v - c_v)^2 with
c_v = 1 for a negated literal and 2 otherwise, which vanishes exactly when
one of its literals holds; Q is the sum over clauses, so on the grid
{1, 2}^u it vanishes exactly at satisfying assignments. The pins
P_i = (X_i - 1)^2 (X_i - 2)^2 vanish exactly on that grid.

A certificate is K, K_1..K_u with P = Q K + sum P_i K_i having every
nonzero coefficient >= 1 and no negative one. Such a P is >= 1 on the
nonnegative orthant (its constant term is >= 1), while a satisfying
assignment would give a grid point where Q, every P_i, and hence P vanish.

Which monomials P must contain is the ``band``: ``dense`` (the default)
asks for every monomial of total degree <= d + 4, which is everything the
pin products P_i K_i can reach; ``orthant`` asks only for the constant term.
Monomials of degree d + 5 and d + 6 can only come from Q K and pure powers
such as X_1^(d+5) never occur there, so no P is dense all the way up.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DomainError, ResourceError
from .lp import LinearProgram, solve_feasibility, solve_feasibility_guided, verify_farkas
from .poly import Monomial, MultiPoly, UniPoly, mpoly_eval

MAX_BRUTE_VARS = 24
PIN_DEGREE = 4

Literal = Tuple[int, bool]  # (1-based variable, negated)


@dataclass(frozen=True)
class CnfFormula:
    u: int
    clauses: Tuple[Tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        if self.u < 1:
            raise DomainError("formula needs at least one variable")
        if not self.clauses:
            raise DomainError("formula needs at least one clause")
        cl = []
        for clause in self.clauses:
            clause = tuple((int(v), bool(neg)) for v, neg in clause)
            if len(clause) != 3:
                raise DomainError(f"clause {clause} does not have exactly 3 literals")
            for v, _ in clause:
                if not 1 <= v <= self.u:
                    raise DomainError(f"variable {v} out of range 1..{self.u}")
            cl.append(clause)
        object.__setattr__(self, "clauses", tuple(cl))

    @classmethod
    def from_ints(cls, u: int, clauses: Sequence[Sequence[int]]) -> "CnfFormula":
        """DIMACS-style signed literals, e.g. ``[[1, -2, 3]]``."""
        return cls(u, tuple(tuple((abs(x), x < 0) for x in c) for c in clauses))

    def to_ints(self) -> List[List[int]]:
        return [[-v if neg else v for v, neg in c] for c in self.clauses]

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[v - 1] != neg for v, neg in c) for c in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Standard DIMACS CNF; every clause must have width exactly 3."""
    u = None
    declared = None
    clauses = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DomainError(f"line {lineno}: malformed header {line!r}")
            try:
                u, declared = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise DomainError(f"line {lineno}: malformed header {line!r}") from exc
            continue
        if u is None:
            raise DomainError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError as exc:
                raise DomainError(f"line {lineno}: bad literal {tok!r}") from exc
            if lit == 0:
                if len(current) != 3:
                    raise DomainError(f"line {lineno}: clause {current} has width {len(current)}, need 3")
                clauses.append(current)
                current = []
            else:
                if abs(lit) > u:
                    raise DomainError(f"line {lineno}: variable {abs(lit)} exceeds declared {u}")
                current.append(lit)
    if u is None:
        raise DomainError("missing 'p cnf' header")
    if current:
        if len(current) != 3:
            raise DomainError(f"trailing clause {current} has width {len(current)}, need 3")
        clauses.append(current)
    if declared is not None and declared != len(clauses):
        raise DomainError(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula.from_ints(u, clauses)


def format_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.u} {len(f.clauses)}"]
    lines += [" ".join(str(x) for x in c) + " 0" for c in f.to_ints()]
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- encoding


def clause_polynomial(clause: Sequence[Literal], u: int) -> MultiPoly:
    out = MultiPoly.constant(1, u)
    for v, neg in clause:
        c = 1 if neg else 2
        lin = MultiPoly.from_univariate(UniPoly([-c, 1]), v - 1, u)
        out = out * lin * lin
    return out


def encode(f: CnfFormula) -> MultiPoly:
    q = MultiPoly(f.u)
    for clause in f.clauses:
        q = q + clause_polynomial(clause, f.u)
    return q


def pin_polynomials(u: int) -> List[MultiPoly]:
    if u < 1:
        raise DomainError("u must be >= 1")
    quartic = UniPoly([-1, 1]) ** 2 * UniPoly([-2, 1]) ** 2
    return [MultiPoly.from_univariate(quartic, i, u) for i in range(u)]


# ---------------------------------------------------------------- brute force


@dataclass(frozen=True)
class SatResult:
    sat: bool
    assignment: Optional[Tuple[bool, ...]] = None


def _guard(u: int):
    if u > MAX_BRUTE_VARS:
        raise ResourceError(f"{u} variables exceeds the exhaustive-scan limit of {MAX_BRUTE_VARS}")


def brute_force_sat(f: CnfFormula) -> SatResult:
    """Scan all 2^u assignments (false before true, variable 1 slowest)."""
    _guard(f.u)
    # bitmask form: a clause is violated by an assignment iff all its literals are false
    masks = []
    for c in f.clauses:
        need_true = need_false = 0
        for v, neg in c:
            bit = 1 << (f.u - v)
            if neg:
                need_true |= bit  # literal false iff the variable is true
            else:
                need_false |= bit
        masks.append((need_true, need_false))
    full = (1 << f.u) - 1
    for bits in range(1 << f.u):
        ok = True
        for need_true, need_false in masks:
            if bits & need_true == need_true and (~bits & full) & need_false == need_false:
                ok = False
                break
        if ok:
            return SatResult(True, tuple(bool(bits >> (f.u - 1 - i) & 1) for i in range(f.u)))
    return SatResult(False)


def hypercube_zero(q: MultiPoly, u: int) -> Optional[Tuple[int, ...]]:
    """First point of {1, 2}^u (lexicographic) where Q vanishes, or None."""
    _guard(u)
    if q.num_vars != u:
        raise DomainError(f"polynomial has {q.num_vars} variables, expected {u}")
    for point in itertools.product((1, 2), repeat=u):
        if mpoly_eval(q, point) == 0:
            return point
    return None


def point_to_assignment(point: Sequence[int]) -> Tuple[bool, ...]:
    return tuple(x == 2 for x in point)


# --------------------------------------------------------------- certificates

DENSE = "dense"  # every monomial of total degree <= d + 4 has coefficient >= 1
ORTHANT = "orthant"  # only the constant term must be >= 1; the rest >= 0
BANDS = (DENSE, ORTHANT)

EXACT_CELL_LIMIT = 60_000  # "auto" uses the exact simplex below this tableau size
MAX_UNKNOWNS = 6_000


def monomials_up_to(u: int, degree: int) -> List[Monomial]:
    """All exponent vectors of total degree <= ``degree``, graded-lex order."""
    if degree < 0:
        return []
    out = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(u), total):
            e = [0] * u
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return sorted(set(out), key=lambda e: (sum(e), e))


def band_degree(d: int, band: str) -> int:
    """Total degree up to which every monomial of P must be present with coefficient >= 1."""
    if band == DENSE:
        return d + PIN_DEGREE
    if band == ORTHANT:
        return 0
    raise DomainError(f"band must be one of {BANDS}, not {band!r}")


@dataclass(frozen=True)
class UnsatCertificate:
    K: MultiPoly
    K_i: Tuple[MultiPoly, ...]
    P: MultiPoly
    degree_bound_used: int
    band: str = DENSE

    @property
    def dense_degree(self) -> int:
        return band_degree(self.degree_bound_used, self.band)


@dataclass(frozen=True)
class CertificateSearch:
    d: int
    certificate: Optional[UnsatCertificate]
    num_unknowns: int
    num_constraints: int
    proof: str  # "point", "simplex-farkas", "guided-farkas" or "evaluation-farkas"
    method: str  # "simplex" or "guided"
    pivots: int = 0


def certificate_lp(f: CnfFormula, d: int, band: str = DENSE):
    """LP over the coefficients of K, K_1..K_u (all free), one row per reachable monomial.

    Returns ``(lp, monomials, generators, basis)``: row i constrains the
    coefficient of ``monomials[i]`` in Q K + sum P_i K_i, and unknown
    ``g * len(basis) + j`` is the coefficient of ``basis[j]`` in the
    multiplier of ``generators[g]`` (Q first, then the pins).
    """
    if d < 0:
        raise DomainError("d must be >= 0")
    dense = band_degree(d, band)
    q = encode(f)
    gens = [q] + pin_polynomials(f.u)
    basis = monomials_up_to(f.u, d)
    if len(gens) * len(basis) > MAX_UNKNOWNS:
        raise ResourceError(
            f"certificate LP at d = {d} has {len(gens) * len(basis)} unknowns (limit {MAX_UNKNOWNS})"
        )
    rows_index: Dict[Monomial, int] = {m: i for i, m in enumerate(monomials_up_to(f.u, dense))}
    columns: List[Dict[Monomial, Fraction]] = []
    for g in gens:
        for e in basis:
            col = {}
            for m, c in g.items():
                key = tuple(a + b for a, b in zip(m, e))
                col[key] = c
                if key not in rows_index:
                    rows_index[key] = len(rows_index)
            columns.append(col)
    monos = sorted(rows_index, key=lambda e: (sum(e), e))
    where = {m: i for i, m in enumerate(monos)}
    table = [[Fraction(0)] * len(columns) for _ in monos]
    for j, col in enumerate(columns):
        for m, c in col.items():
            table[where[m]][j] = c
    rows = tuple((tuple(r), Fraction(1 if sum(m) <= dense else 0)) for r, m in zip(table, monos))
    lp = LinearProgram(len(columns), rows, (None,) * len(columns))
    return lp, monos, gens, basis


def _evaluation_farkas(monos: Sequence[Monomial], point: Sequence[int]) -> List[Fraction]:
    # evaluating at a common zero of Q and every pin kills every column
    out = []
    for m in monos:
        v = Fraction(1)
        for x, k in zip(point, m):
            v *= Fraction(x) ** k
        out.append(v)
    return out


def _assemble(f: CnfFormula, x, gens, basis, d: int, band: str) -> UnsatCertificate:
    nb = len(basis)
    polys = [MultiPoly(f.u, {e: x[g * nb + j] for j, e in enumerate(basis)}) for g in range(len(gens))]
    total = MultiPoly(f.u)
    for g, k in zip(gens, polys):
        total = total + g * k
    smallest = min(c for _, c in total.items())
    if smallest < 1:  # lift the stray coefficients in (0, 1) above the band to >= 1
        s = 1 / smallest
        polys = [k * s for k in polys]
        total = total * s
    return UnsatCertificate(polys[0], tuple(polys[1:]), total, d, band)


def find_unsat_certificate(
    f: CnfFormula,
    d: int,
    band: str = DENSE,
    method: str = "auto",
    use_evaluation_hint: bool = False,
    max_cells: Optional[int] = None,
) -> CertificateSearch:
    """One LP at total-degree bound ``d`` for K and every K_i.

    ``method="simplex"`` runs the exact simplex; ``"guided"`` solves in
    floating point and snaps to an exact witness (falling back to the exact
    simplex if the snapped witness does not verify); ``"auto"`` picks the
    simplex for small tableaus. Every answer carries an exactly verified
    witness either way. With ``use_evaluation_hint`` a satisfying grid
    point found by brute force is tried as a Farkas witness first.
    """
    if method not in ("auto", "simplex", "guided"):
        raise DomainError(f"unknown method {method!r}")
    lp, monos, gens, basis = certificate_lp(f, d, band)
    n, m = lp.num_vars, lp.num_constraints
    if method == "auto":
        method = "simplex" if (m + 1) * (n + m + 1) <= EXACT_CELL_LIMIT else "guided"

    out = None
    if use_evaluation_hint and f.u <= MAX_BRUTE_VARS:
        res = brute_force_sat(f)
        if res.sat:
            hint = _evaluation_farkas(monos, [2 if b else 1 for b in res.assignment])
            if verify_farkas(lp, hint):
                return CertificateSearch(d, None, n, m, "evaluation-farkas", "hint")
    if method == "guided":
        out = solve_feasibility_guided(lp)
        if out is None:
            method = "simplex"  # snapping failed; settle it exactly
    if out is None:
        kwargs = {} if max_cells is None else {"max_cells": max_cells}
        try:
            out = solve_feasibility(lp, **kwargs)
        except ResourceError as exc:
            raise ResourceError(f"certificate LP at d = {d}: {n} unknowns, {m} constraints: {exc}") from exc

    if not out.feasible:
        if not verify_farkas(lp, out.farkas):
            raise AssertionError(f"unverified infeasibility at d = {d}")
        proof = "guided-farkas" if method == "guided" else "simplex-farkas"
        return CertificateSearch(d, None, n, m, proof, method, out.pivots)

    cert = _assemble(f, out.point, gens, basis, d, band)
    if not verify_unsat_certificate(f, cert):
        raise AssertionError(f"LP point at d = {d} fails exact certificate verification")
    return CertificateSearch(d, cert, n, m, "point", method, out.pivots)


def search_unsat_certificate(f: CnfFormula, max_d: int, start: int = 0, **kwargs) -> List[CertificateSearch]:
    """Iterative deepening d = start, ..., max_d; stops at the first certificate."""
    if max_d < start:
        raise DomainError("max_d must be >= start")
    runs = []
    for d in range(start, max_d + 1):
        run = find_unsat_certificate(f, d, **kwargs)
        runs.append(run)
        if run.certificate is not None:
            break
    return runs


def verify_unsat_certificate(f: CnfFormula, cert: UnsatCertificate) -> bool:
    """Exact identity P = Q K + sum P_i K_i, required band present, every coefficient >= 1."""
    if cert.band not in BANDS:
        return False
    if cert.K.num_vars != f.u or len(cert.K_i) != f.u or cert.P.num_vars != f.u:
        return False
    if any(k.num_vars != f.u for k in cert.K_i):
        return False
    total = encode(f) * cert.K
    for pin, k in zip(pin_polynomials(f.u), cert.K_i):
        total = total + pin * k
    if total != cert.P:
        return False
    if any(c < 1 for _, c in cert.P.items()):
        return False
    return all(cert.P.coeff(m) >= 1 for m in monomials_up_to(f.u, cert.dense_degree))


def certificate_size(u: int, d: int) -> Tuple[int, int]:
    """(unknowns, dense-band rows) of the degree-``d`` LP, for budgeting."""
    return (u + 1) * comb(u + d, d), comb(u + d + PIN_DEGREE, u)
