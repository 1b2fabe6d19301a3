"""Ground truth for real roots, plus float root data for the beta heuristics.

Sturm counting is exact (rational remainder chains). Complex roots are
double-precision Aberth approximations; they only ever feed degree
heuristics and diagnostics, never a certificate.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import kernels
from .errors import ConvergenceError, DomainError
from .poly import UniPoly, as_rational, max_coeff, square

INF = math.inf

ZERO_IMAG_REL = 1e-9  # |im| <= this * |z| counts as a real root
MAX_ITER = 200
STEP_TOL = 1e-14


# ------------------------------------------------------------------- Sturm


def sturm_chain(p: UniPoly) -> List[UniPoly]:
    """P, P', then negated remainders, until the remainder vanishes."""
    if p.is_zero():
        raise DomainError("Sturm chain of the zero polynomial")
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _squarefree_chain(p: UniPoly) -> List[UniPoly]:
    chain = sturm_chain(p)
    g = chain[-1]
    if g.degree and g.degree > 0:
        chain = [c // g for c in chain]
    return chain


def _sign_at(p: UniPoly, x) -> int:
    if x == INF:
        v = p.leading
    elif x == -INF:
        v = p.leading if p.degree % 2 == 0 else -p.leading
    else:
        acc = Fraction(0)
        for c in reversed(p.coeffs):
            acc = acc * x + c
        v = acc
    return (v > 0) - (v < 0)


def _variations(chain: Sequence[UniPoly], x) -> int:
    return kernels.sign_changes([_sign_at(c, x) for c in chain])


def _endpoint(x):
    if x is None:
        raise DomainError("endpoint must be a rational or +-inf")
    if isinstance(x, float) and math.isinf(x):
        return x
    return as_rational(x)


def sturm_count(p: UniPoly, lo=-INF, hi=INF) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``; endpoints may be +-inf."""
    if p.is_zero():
        raise DomainError("sturm_count of the zero polynomial")
    lo, hi = _endpoint(lo), _endpoint(hi)
    if not lo < hi:
        raise DomainError(f"need lo < hi, got ({lo}, {hi}]")
    if p.degree == 0:
        return 0
    chain = _squarefree_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)


def has_positive_real_root(p: UniPoly) -> bool:
    return sturm_count(p, 0, INF) > 0


def has_real_root(p: UniPoly) -> bool:
    return sturm_count(p, -INF, INF) > 0


def positive_root_count(p: UniPoly) -> int:
    return sturm_count(p, 0, INF)


# ----------------------------------------------------------- complex roots


@dataclass(frozen=True)
class ComplexRootSet:
    roots: Tuple[complex, ...]
    residual: float  # max |P(z)| / |leading| over the returned roots
    iterations: int = 0
    converged: bool = True

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def pairs(self) -> List[Tuple[float, float]]:
        return [(z.real, z.imag) for z in self.roots]


def _is_real(z: complex) -> bool:
    return abs(z.imag) <= ZERO_IMAG_REL * abs(z)


def _horner(coeffs, z):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _monic(p: UniPoly) -> UniPoly:
    return p.scale(1 / p.leading)


def _gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        r = a % b
        a, b = b, (r if r.is_zero() else _monic(r))
    return _monic(a)


def squarefree_parts(p: UniPoly) -> List[Tuple[UniPoly, int]]:
    """Yun's square-free decomposition: ``p = lead * prod(f_i ** i)``, f_i monic square-free."""
    if p.is_zero() or p.degree < 1:
        raise DomainError("squarefree_parts needs degree >= 1")
    dp = p.derivative()
    a = _gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree and b.degree > 0:
        a = _gcd(b, d)
        b_next = b // a
        c = d // a
        if a.degree and a.degree > 0:
            out.append((_monic(a), i))
        b = b_next
        d = c - b.derivative()
        i += 1
    return out


def _symmetrize(roots: List[complex]) -> List[complex]:
    # real input: make the root list exactly conjugate-closed
    out = []
    upper = []
    lower = []
    for z in roots:
        if _is_real(z):
            out.append(complex(z.real, 0.0))
        elif z.imag > 0:
            upper.append(z)
        else:
            lower.append(z)
    remaining = list(lower)
    for z in upper:
        if not remaining:
            out.append(z)
            continue
        k = min(range(len(remaining)), key=lambda j: abs(remaining[j].conjugate() - z))
        w = remaining.pop(k)
        mid = (z + w.conjugate()) / 2
        out.extend([mid, mid.conjugate()])
    out.extend(remaining)
    return sorted(out, key=lambda z: (z.real, z.imag))


def _aberth_simple(f: UniPoly, max_iter: int, tol: float):
    n = f.degree
    coeffs = [complex(float(c)) for c in f.coeffs]
    if n == 1:
        return [-coeffs[0] / coeffs[1]], 0, True
    lead_c = coeffs[-1]
    radius = 1.0 + max(abs(c / lead_c) for c in coeffs[:-1])
    start = [radius * cmath.exp(1j * (2 * math.pi * j / n + 0.4)) for j in range(n)]
    found, its, ok = kernels.aberth(coeffs, start, max_iter, tol)
    if not ok:
        absc = [abs(c) for c in coeffs]
        backward = max(abs(_horner(coeffs, z)) / max(_horner(absc, abs(z)).real, 1e-300) for z in found)
        ok = backward <= 1e-10
    return list(found), its, ok


def complex_roots(p: UniPoly, max_iter: int = MAX_ITER, tol: float = STEP_TOL) -> ComplexRootSet:
    """All complex roots (with multiplicity) by Aberth-Ehrlich iteration.

    Starts on a circle of radius ``1 + max|a_i / a_N|``. Raises
    ``ConvergenceError`` (carrying the best iterate) if neither the step
    size nor the backward error settles within ``max_iter`` sweeps. Each
    square-free factor is iterated separately, so repeated roots come out
    as accurately as simple ones.
    """
    if p.is_zero() or p.degree < 1:
        raise DomainError("complex_roots needs degree >= 1")
    k, q = p.strip_x_power()
    lead = float(abs(p.leading))
    roots: List[complex] = [0j] * k
    iterations = 0
    converged = True
    if q.degree:
        for factor, mult in squarefree_parts(q):
            found, its, ok = _aberth_simple(factor, max_iter, tol)
            iterations = max(iterations, its)
            converged = converged and ok
            roots.extend(found * mult)
    roots = _symmetrize(roots)
    fcoeffs = [float(c) for c in p.coeffs]
    residual = max(abs(_horner(fcoeffs, z)) for z in roots) / lead
    result = ComplexRootSet(tuple(roots), residual, iterations, converged)
    if not converged:
        raise ConvergenceError(
            f"Aberth iteration did not converge in {max_iter} sweeps (residual {residual:.3g})",
            best=result,
        )
    return result


# -------------------------------------------------------------- beta data


@dataclass(frozen=True)
class BetaEstimate:
    value: float
    mode: str
    applicable: bool


def beta_estimate(p: UniPoly, mode: str = "imag", roots: Optional[ComplexRootSet] = None) -> BetaEstimate:
    """Smallest nonzero |imaginary part| (``imag``) or |im/re| (``ratio``) over the roots."""
    if mode not in ("imag", "ratio"):
        raise DomainError(f"mode must be 'imag' or 'ratio', not {mode!r}")
    rs = roots if roots is not None else complex_roots(p)
    if mode == "imag":
        vals = [abs(z.imag) for z in rs if not _is_real(z)]
    else:
        vals = [
            abs(z.imag / z.real)
            for z in rs
            if not _is_real(z) and abs(z.real) > ZERO_IMAG_REL * abs(z)
        ]
    if not vals:
        return BetaEstimate(math.nan, mode, False)
    return BetaEstimate(min(vals), mode, True)


def quadratic_components(p: UniPoly, roots: Optional[ComplexRootSet] = None) -> List[Tuple[float, float]]:
    """The N factors ((X - p)^2 + q^2) of P^2 / lead^2 as (p, q) pairs, q >= 0.

    A real root r of P contributes (r, 0) once; a conjugate pair p +- qi
    contributes (p, q) twice.
    """
    rs = roots if roots is not None else complex_roots(p)
    comps = []
    for z in rs:
        if _is_real(z):
            comps.append((z.real, 0.0))
        elif z.imag > 0:
            comps.extend([(z.real, z.imag), (z.real, z.imag)])
    return sorted(comps)


def components_product(comps: Sequence[Tuple[float, float]]) -> List[float]:
    """Expand prod ((X - p)^2 + q^2) in floats (ascending coefficients)."""
    out = [1.0]
    for pr, qi in comps:
        quad = [pr * pr + qi * qi, -2.0 * pr, 1.0]
        out = kernels.pure.convolve(out, quad)
    return out


@dataclass(frozen=True)
class RatioDiagnostic:
    observed_max_ratio: Optional[float]  # max p/q over components with p > 0, q != 0
    beta: Optional[float]
    bound: Optional[float]  # 2 beta^-1 (M N)^2

    @property
    def within_bound(self) -> Optional[bool]:
        if self.observed_max_ratio is None or self.bound is None:
            return None
        return self.observed_max_ratio <= self.bound


def ratio_bound_diagnostic(p: UniPoly) -> RatioDiagnostic:
    """Observed worst p/q in the quadratic components against 2 beta^-1 (M N)^2.

    Beta is taken from the same root set, so this is a consistency report on
    the bound, not an independent proof of it.
    """
    rs = complex_roots(p)
    comps = quadratic_components(p, rs)
    ratios = [pr / qi for pr, qi in comps if pr > 0 and qi > 0]
    beta = beta_estimate(p, "imag", rs)
    if not beta.applicable:
        return RatioDiagnostic(max(ratios) if ratios else None, None, None)
    n = p.degree
    m = float(max_coeff(p))
    bound = 2.0 / beta.value * (m * n) ** 2
    return RatioDiagnostic(max(ratios) if ratios else None, beta.value, bound)


@dataclass(frozen=True)
class CoefficientBounds:
    K: int  # degree of P^2
    L: Fraction  # max |coefficient| of P^2
    upper: Fraction  # K L
    lower: Fraction  # (2 K L)^-1


def coefficient_bounds(p: UniPoly) -> CoefficientBounds:
    """The K, L quantities of the squared polynomial and the derived bounds KL, 1/(2KL)."""
    if p.is_zero() or p.degree < 1:
        raise DomainError("coefficient_bounds needs degree >= 1")
    sq = square(p)
    k = sq.degree
    big_l = max_coeff(sq)
    return CoefficientBounds(k, big_l, k * big_l, 1 / (2 * k * big_l))
