"""Positive cofactors for quadratics with roots p +- qi, p, q > 0.

R(X) = X^D + C_1 X^{D-1} + ... clears the sign change of
X^2 - 2pX + (p^2 + q^2) once the sequence

    C_i = 2p C_{i-1} - (p^2 + q^2) C_{i-2},   C_0 = 1, C_{-1} = 0

stays positive long enough; the first non-positive index depends only on
h = p/q and grows like pi * h.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Tuple

from . import kernels
from .errors import DomainError, ResourceError, InvariantViolation
from .lp import LinearProgram, solve_feasibility
from .poly import UniPoly, as_rational, mul

_PI_DIGITS = "3.14159265358979323846264338327950288419716939937510582097494459"
PI_LO = Fraction(_PI_DIGITS)
PI_HI = PI_LO + Fraction(1, 10 ** (len(_PI_DIGITS) - 2))


def floor_pi_times(x) -> int:
    """floor(pi * x) for rational x >= 0, exact while 62 digits of pi decide it."""
    x = as_rational(x)
    if x < 0:
        raise DomainError("floor_pi_times expects x >= 0")
    lo, hi = floor(PI_LO * x), floor(PI_HI * x)
    if lo != hi:
        raise ResourceError(f"pi to 62 digits cannot decide floor(pi * {x})")
    return lo


@dataclass(frozen=True)
class QuadraticFactor:
    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", as_rational(self.p))
        object.__setattr__(self, "q", as_rational(self.q))
        if self.p <= 0 or self.q <= 0:
            raise DomainError("quadratic factor needs p > 0 and q > 0")

    @property
    def poly(self) -> UniPoly:
        return UniPoly([self.p * self.p + self.q * self.q, -2 * self.p, 1])

    @property
    def ratio(self) -> Fraction:
        return self.p / self.q


@dataclass(frozen=True)
class CofactorRun:
    h: float
    negative_index: int
    pi_estimate: float


def _positive_float(h) -> float:
    hf = float(h)
    if not hf > 0:
        raise DomainError(f"ratio must be positive, got {h!r}")
    return hf


def negative_index(h) -> int:
    """Smallest i >= 1 with C_i <= 0 for p/q = h (double-precision ratio recurrence)."""
    hf = _positive_float(h)
    limit = int(4 * hf) + 16
    i = kernels.negative_index_ratio(hf, limit)
    if i < 0:
        raise InvariantViolation(f"C_i stayed positive for {limit} steps at h = {hf}")
    return i


def negative_index_exact(p, q) -> int:
    """Same index from the exact rational C_i recurrence at the given p, q."""
    f = QuadraticFactor(p, q)
    two_p = 2 * f.p
    norm = f.p * f.p + f.q * f.q
    prev, cur = Fraction(1), two_p  # C_0, C_1
    i = 1
    limit = 4 * floor(f.ratio) + 16
    while cur > 0:
        if i >= limit:
            raise InvariantViolation(f"C_i stayed positive for {limit} steps at p/q = {f.ratio}")
        prev, cur = cur, two_p * cur - norm * prev
        i += 1
    return i


def pi_estimate(h) -> float:
    hf = _positive_float(h)
    return negative_index(hf) / hf


def cofactor_run(h) -> CofactorRun:
    hf = _positive_float(h)
    i = negative_index(hf)
    return CofactorRun(hf, i, i / hf)


def cofactor_degree(p, q) -> int:
    """1 + floor(pi p / q)."""
    f = QuadraticFactor(p, q)
    return 1 + floor_pi_times(f.ratio)


def cofactor_lp(quad: UniPoly, degree: int) -> LinearProgram:
    """R_0..R_D >= 1 and every coefficient of quad * R >= 1 (a scaled form of > 0)."""
    n = degree + 1
    rows = []
    qc = quad.coeffs
    for k in range(quad.degree + degree + 1):
        coeffs = [Fraction(0)] * n
        for i in range(max(0, k - quad.degree), min(degree, k) + 1):
            coeffs[i] = qc[k - i]
        rows.append((tuple(coeffs), Fraction(1)))
    return LinearProgram(n, tuple(rows), (Fraction(1),) * n)


def build_cofactor(p, q) -> Tuple[UniPoly, UniPoly]:
    """R with positive coefficients such that ((X-p)^2 + q^2) R has positive coefficients.

    Tries D = negative_index(p/q), then D+1, D+2. Failure at all three would
    contradict the degree bound and raises ``InvariantViolation``.
    """
    f = QuadraticFactor(p, q)
    quad = f.poly
    start = negative_index(f.ratio)
    for degree in range(start, start + 3):
        out = solve_feasibility(cofactor_lp(quad, degree))
        if out.feasible:
            r = UniPoly(out.point)
            product = mul(quad, r)
            if any(c <= 0 for c in r.coeffs) or any(c <= 0 for c in product.coeffs):
                raise InvariantViolation("LP point does not give a positive cofactor")
            return r, product
    raise InvariantViolation(
        f"no positive cofactor of degree <= {start + 2} for p = {f.p}, q = {f.q}"
    )
