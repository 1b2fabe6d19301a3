"""Deciding positive-root existence by positivity certificates.

P has no positive real root iff some T with nonnegative coefficients makes
P*T have strictly positive coefficients (any such product is positive on
x > 0, and Descartes' rule forbids it when P vanishes there). The search
solves the linear feasibility problem "T_i >= 0, every coefficient of
P*T >= 1" for increasing degrees D; scaling makes ">= 1" equivalent to the
strict form, and every certificate is re-checked exactly.

Infeasibility at a given D is also proven, never assumed: either by the
simplex's own Farkas multipliers or by a rational x > 0 with P(x) <= 0,
whose powers (1, x, x^2, ...) are Farkas multipliers for every D at once.
"""

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .cofactor import floor_pi_times
from .errors import ConvergenceError, DomainError, ResourceError
from .lp import LinearProgram, LpOutcome, solve_feasibility, verify_farkas
from .oracle import beta_estimate, complex_roots, has_positive_real_root
from .poly import UniPoly, as_rational, evaluate, max_coeff, mul, reflect, sign_changes

NO_POSITIVE_ROOT = "no_positive_root"
POSITIVE_ROOT_EXISTS = "positive_root_exists"
HAS_REAL_ROOT = "has_real_root"
NO_REAL_ROOT = "no_real_root"

DEFAULT_DEGREE_CAP = 64
ESCALATION_FACTOR = 16


def default_degree_cap() -> int:
    raw = os.environ.get("POSCERT_DEGREE_CAP")
    if not raw:
        return DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(f"POSCERT_DEGREE_CAP must be a natural number, got {raw!r}") from exc
    if cap < 0:
        raise DomainError("POSCERT_DEGREE_CAP must be >= 0")
    return cap


def degree_bound(n: int, m, beta) -> int:
    """1 + floor(2 pi M^2 N^3 / beta): the multiplier degree that always suffices."""
    beta = as_rational(beta)
    m = as_rational(m)
    if beta <= 0:
        raise DomainError("beta must be positive")
    if n < 1:
        raise DomainError("degree N must be >= 1")
    if m <= 0:
        raise DomainError("M must be positive")
    return 1 + floor_pi_times(2 * m * m * n ** 3 / beta)


@dataclass(frozen=True)
class MultiplierProblem:
    """Unknown T_0..T_D; row k of the LP is coefficient k of P*T."""

    P: UniPoly
    D: int

    def lp(self) -> LinearProgram:
        pc = self.P.coeffs
        n = self.P.degree
        width = self.D + 1
        rows = []
        for k in range(n + self.D + 1):
            coeffs = [Fraction(0)] * width
            for i in range(max(0, k - n), min(self.D, k) + 1):
                coeffs[i] = pc[k - i]
            rows.append((tuple(coeffs), Fraction(1)))
        return LinearProgram(width, tuple(rows), (Fraction(0),) * width)


@dataclass(frozen=True)
class PositivityCertificate:
    P: UniPoly  # the polynomial certified (X^k stripped, sign normalized)
    T: UniPoly
    V: UniPoly
    D: int

    def verify(self) -> bool:
        return verify_certificate(self.P, self.T) and mul(self.P, self.T) == self.V


@dataclass(frozen=True)
class Attempt:
    D: int
    feasible: bool
    proof: str  # "point", "simplex-farkas" or "evaluation-farkas"
    pivots: int = 0


@dataclass(frozen=True)
class DecisionConfig:
    beta_override: Optional[Fraction] = None
    degree_cap: int = field(default_factory=default_degree_cap)
    use_oracle_crosscheck: bool = True
    use_evaluation_hint: bool = True

    def __post_init__(self):
        if self.degree_cap < 0:
            raise DomainError("degree_cap must be >= 0")
        if self.beta_override is not None:
            b = as_rational(self.beta_override)
            if b <= 0:
                raise DomainError("beta_override must be positive")
            object.__setattr__(self, "beta_override", b)

    def schedule(self, n: int, limit: Optional[int] = None) -> List[int]:
        """D = 0, N, 2N, 4N, ... up to min(cap, limit), always ending at that ceiling."""
        top = self.degree_cap if limit is None else min(self.degree_cap, limit)
        out = [0]
        step = max(n, 1)
        while step < top:
            out.append(step)
            step *= 2
        if top > 0:
            out.append(top)
        return sorted(set(out))


@dataclass(frozen=True)
class Decision:
    verdict: str
    certificate: Optional[PositivityCertificate]
    attempts: Tuple[Attempt, ...]
    degree_bound: Optional[int]
    bounded_search: bool  # LP route stopped below degree_bound without a certificate
    oracle_has_positive_root: Optional[bool]
    x_power: int = 0  # factor X^k stripped before searching
    negated: bool = False

    @property
    def D_used(self) -> Optional[int]:
        return self.certificate.D if self.certificate else None

    @property
    def max_D(self) -> int:
        return max((a.D for a in self.attempts), default=0)


@dataclass(frozen=True)
class RealRootDecision:
    verdict: str
    root_at_zero: bool
    positive: Decision
    negative: Decision  # decision for P(-X)


def verify_certificate(p: UniPoly, t: UniPoly) -> bool:
    """T != 0, T >= 0 coefficientwise, and every coefficient of P*T is > 0."""
    if t.is_zero() or p.is_zero():
        return False
    if any(c < 0 for c in t.coeffs):
        return False
    return all(c > 0 for c in mul(p, t).coeffs)


def _normalize(p: UniPoly) -> Tuple[int, bool, UniPoly]:
    if p.is_zero():
        raise DomainError("zero polynomial")
    k, q = p.strip_x_power()
    negated = q.leading < 0
    return k, negated, (-q if negated else q)


def _evaluation_witness(p: UniPoly) -> Optional[Fraction]:
    """A rational x > 0 with P(x) <= 0, found near float roots; None if none turns up."""
    if p.coeff(0) <= 0:
        return Fraction(0) if p.coeff(0) < 0 else None
    try:
        roots = complex_roots(p)
    except ConvergenceError as exc:
        roots = exc.best
    if roots is None:
        return None
    for z in roots:
        if z.real <= 0 or abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        base = Fraction(z.real)
        for rel in (0, 1e-12, 1e-9, 1e-6, 1e-3):
            for sgn in (1, -1):
                x = base * (1 + sgn * Fraction(rel)) if rel else base
                if x > 0 and evaluate(p, x) <= 0:
                    return x
    return None


def _farkas_from_point(x: Fraction, rows: int) -> List[Fraction]:
    if x == 0:
        return [Fraction(1)] + [Fraction(0)] * (rows - 1)
    out = [Fraction(1)]
    for _ in range(rows - 1):
        out.append(out[-1] * x)
    return out


def solve_multiplier(
    p: UniPoly, degree: int, witness_x: Optional[Fraction] = None
) -> Tuple[LpOutcome, Optional[PositivityCertificate]]:
    """Run the degree-``degree`` LP; returns the raw outcome and, if feasible, the certificate."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    if p.coeff(0) == 0:
        raise DomainError("factor out X^k first: P(0) must be nonzero")
    if degree < 0:
        raise DomainError("degree must be >= 0")
    lp = MultiplierProblem(p, degree).lp()
    hint = None if witness_x is None else _farkas_from_point(witness_x, lp.num_constraints)
    try:
        out = solve_feasibility(lp, farkas_hint=hint)
    except ResourceError as exc:
        raise ResourceError(f"multiplier LP at D = {degree}: {exc}") from exc
    if not out.feasible:
        if not verify_farkas(lp, out.farkas):
            raise AssertionError(f"unverified infeasibility at D = {degree}")
        return out, None
    t = UniPoly(out.point)
    cert = PositivityCertificate(p, t, mul(p, t), degree)
    if not cert.verify():
        raise AssertionError(f"LP point at D = {degree} fails exact verification")
    return out, cert


def find_multiplier(p: UniPoly, degree: int) -> Optional[PositivityCertificate]:
    """Certificate with deg T <= ``degree``, or None when the LP is infeasible."""
    return solve_multiplier(p, degree)[1]


def _beta_for(p: UniPoly, cfg: DecisionConfig) -> Optional[Fraction]:
    if cfg.beta_override is not None:
        return cfg.beta_override
    try:
        est = beta_estimate(p, "imag")
    except ConvergenceError:
        return None
    if not est.applicable:
        return None
    # round down to a tidy rational
    beta = Fraction(math.floor(est.value * 2 ** 40), 2 ** 40)
    return beta if beta > 0 else None


def decide_positive_root(p: UniPoly, cfg: Optional[DecisionConfig] = None) -> Decision:
    """Search for a positivity certificate of P by iterative deepening.

    A certificate is a proof that P has no positive root. Exhausting the
    schedule is a proof only when it reached the degree bound; otherwise
    the decision is flagged ``bounded_search`` and, with the oracle cross
    check on, the Sturm count settles the verdict. When the oracle says
    "no positive root" but the capped search found nothing, the search is
    continued (doubling D) up to ``ESCALATION_FACTOR * cap`` or the bound.
    """
    cfg = cfg or DecisionConfig()
    k, negated, q = _normalize(p)
    if q.degree == 0:
        cert = PositivityCertificate(q, UniPoly([1]), q, 0)
        return Decision(NO_POSITIVE_ROOT, cert, (Attempt(0, True, "point"),), None, False,
                        False if cfg.use_oracle_crosscheck else None, k, negated)

    n = q.degree
    beta = _beta_for(q, cfg)
    bound = degree_bound(n, max(max_coeff(q), Fraction(1)), beta) if beta is not None else None
    witness = _evaluation_witness(q) if cfg.use_evaluation_hint else None

    attempts: List[Attempt] = []

    def attempt(degree: int) -> Optional[PositivityCertificate]:
        out, cert = solve_multiplier(q, degree, witness)
        if cert is not None:
            proof = "point"
        else:
            proof = "evaluation-farkas" if out.stats.get("hint") else "simplex-farkas"
        attempts.append(Attempt(degree, cert is not None, proof, out.pivots))
        return cert

    for degree in cfg.schedule(n, bound):
        cert = attempt(degree)
        if cert is not None:
            oracle = has_positive_real_root(q) if cfg.use_oracle_crosscheck else None
            if oracle:
                raise AssertionError("certificate found for a polynomial with a positive root")
            return Decision(NO_POSITIVE_ROOT, cert, tuple(attempts), bound, False, oracle, k, negated)

    reached = bound is not None and attempts[-1].D >= bound
    if not cfg.use_oracle_crosscheck:
        return Decision(POSITIVE_ROOT_EXISTS, None, tuple(attempts), bound, not reached, None, k, negated)

    oracle = has_positive_real_root(q)
    if oracle:
        return Decision(POSITIVE_ROOT_EXISTS, None, tuple(attempts), bound, not reached, True, k, negated)

    # oracle says no positive root: a certificate exists at some degree, keep looking
    ceiling = ESCALATION_FACTOR * max(cfg.degree_cap, 1)
    if bound is not None:
        ceiling = min(ceiling, bound)
    degree = attempts[-1].D
    while degree < ceiling:
        degree = min(2 * max(degree, 1), ceiling)
        cert = attempt(degree)
        if cert is not None:
            return Decision(NO_POSITIVE_ROOT, cert, tuple(attempts), bound, False, False, k, negated)
    return Decision(NO_POSITIVE_ROOT, None, tuple(attempts), bound, True, False, k, negated)


def decide_real_root(p: UniPoly, cfg: Optional[DecisionConfig] = None) -> RealRootDecision:
    """Combine the X = 0 check with the positive-side decisions for P(X) and P(-X)."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    cfg = cfg or DecisionConfig()
    at_zero = p.coeff(0) == 0
    pos = decide_positive_root(p, cfg)
    neg = decide_positive_root(reflect(p), cfg)
    has = at_zero or pos.verdict == POSITIVE_ROOT_EXISTS or neg.verdict == POSITIVE_ROOT_EXISTS
    return RealRootDecision(HAS_REAL_ROOT if has else NO_REAL_ROOT, at_zero, pos, neg)


# ------------------------------------------------------- sign-change witness


def _geometric(a: Fraction, b: int) -> UniPoly:
    # X^{b-1} + a X^{b-2} + ... + a^{b-1}; (X - a) times this is X^b - a^b
    return UniPoly([a ** (b - 1 - j) for j in range(b)])


def sign_change_witness(base: UniPoly, roots: Sequence) -> Tuple[UniPoly, UniPoly]:
    """U > 0 coefficientwise with W = base * prod(X - a_i) * U having exactly k sign changes.

    With b = deg(base) + 1 each (X - a_i) times U_i becomes X^b - a_i^b, so
    W = base * prod(X^b - a_i^b): alternating blocks that never overlap.
    """
    if base.is_zero() or any(c <= 0 for c in base.coeffs):
        raise DomainError("base polynomial must have all coefficients > 0")
    rs = [as_rational(a) for a in roots]
    if any(a <= 0 for a in rs):
        raise DomainError("roots must be positive")
    b = base.degree + 1
    u = UniPoly([1])
    linear = UniPoly([1])
    for a in rs:
        u = mul(u, _geometric(a, b))
        linear = mul(linear, UniPoly([-a, 1]))
    w = mul(mul(base, linear), u)
    return u, w


def witness_sign_changes(base: UniPoly, roots: Sequence) -> int:
    return sign_changes(sign_change_witness(base, roots)[1])
