"""Exact polynomial arithmetic over the rationals.

``UniPoly`` is a dense univariate polynomial with ascending ``Fraction``
coefficients; ``MultiPoly`` is a sparse multivariate polynomial keyed by
exponent tuples. Both are immutable and canonical (no trailing zeros, no
zero terms), so equality is structural.

Rational coefficients suffice for everything downstream: every linear
program built from these polynomials has rational data, and a rational LP
that is feasible over the reals has a rational feasible point (a vertex of
its feasible region), so restricting multipliers to rationals loses nothing.
"""

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import kernels
from .errors import DomainError

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` / decimal strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError("booleans are not coefficients")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value.strip() if isinstance(value, str) else value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational number: {value!r}") from exc
    if isinstance(value, float):
        return Fraction(value)
    raise DomainError(f"not a rational number: {value!r}")


class UniPoly:
    """Dense univariate polynomial, ``coeffs[i]`` multiplies ``X**i``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._c = tuple(cs)

    @classmethod
    def _raw(cls, cs: List[Fraction]) -> "UniPoly":
        while cs and cs[-1] == 0:
            cs.pop()
        p = cls.__new__(cls)
        p._c = tuple(cs)
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls([0] * k + [c])

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> Optional[int]:
        """Index of the last nonzero coefficient; ``None`` for the zero polynomial."""
        return len(self._c) - 1 if self._c else None

    def is_zero(self) -> bool:
        return not self._c

    @property
    def leading(self) -> Fraction:
        if not self._c:
            raise DomainError("zero polynomial has no leading coefficient")
        return self._c[-1]

    def coeff(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def __len__(self):
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == UniPoly([other])._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"UniPoly({format_list(self)})"

    def __str__(self):
        return format_poly(self)

    def __neg__(self):
        return UniPoly._raw([-c for c in self._c])

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power")
        out = UniPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        return evaluate(self, x)

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([i * c for i, c in enumerate(self._c)][1:])

    def scale(self, c) -> "UniPoly":
        c = as_rational(c)
        return UniPoly._raw([c * a for a in self._c])

    def shift(self, k: int) -> "UniPoly":
        """Multiply by ``X**k``."""
        if not self._c:
            return self
        return UniPoly._raw([Fraction(0)] * k + list(self._c))

    def strip_x_power(self) -> Tuple[int, "UniPoly"]:
        """Return ``(k, Q)`` with ``self == X**k * Q`` and ``Q(0) != 0``."""
        if not self._c:
            raise DomainError("zero polynomial")
        k = 0
        while self._c[k] == 0:
            k += 1
        return k, UniPoly._raw(list(self._c[k:]))

    def divmod(self, divisor: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        if divisor.is_zero():
            raise DomainError("division by the zero polynomial")
        rem = list(self._c)
        dd = divisor.degree
        lead = divisor.leading
        if len(rem) - 1 < dd:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dd)
        dc = divisor._c
        for k in range(len(rem) - 1 - dd, -1, -1):
            f = rem[k + dd] / lead
            quot[k] = f
            if f:
                for j in range(dd + 1):
                    rem[k + j] -= f * dc[j]
        return UniPoly._raw(quot), UniPoly._raw(rem[:dd])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]


def _coerce(x) -> Optional[UniPoly]:
    if isinstance(x, UniPoly):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return UniPoly([x])
    return None


X = UniPoly([0, 1])


def mul(p: UniPoly, q: UniPoly) -> UniPoly:
    """Exact product. ``degree(p*q) == degree(p) + degree(q)`` for nonzero factors."""
    return UniPoly._raw(kernels.convolve(list(p.coeffs), list(q.coeffs)))


def evaluate(p: UniPoly, x) -> Fraction:
    """Horner evaluation at a rational point."""
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def sign_changes(p: UniPoly) -> int:
    """Number of sign alternations in the nonzero coefficient sequence."""
    if p.is_zero():
        raise DomainError("sign_changes of the zero polynomial")
    return kernels.sign_changes(p.coeffs)


def reflect(p: UniPoly) -> UniPoly:
    """``P(-X)``."""
    return UniPoly._raw([-c if i % 2 else c for i, c in enumerate(p.coeffs)])


def square(p: UniPoly) -> UniPoly:
    return mul(p, p)


def coefficient_normalize(p: UniPoly) -> UniPoly:
    """Positive rescaling so that the smallest nonzero |coefficient| is exactly 1."""
    if p.is_zero():
        raise DomainError("cannot normalize the zero polynomial")
    smallest = min(abs(c) for c in p.coeffs if c)
    return UniPoly._raw([c / smallest for c in p.coeffs])


def max_coeff(p: UniPoly) -> Fraction:
    return max((abs(c) for c in p.coeffs), default=Fraction(0))


@dataclass(frozen=True)
class PolyMeta:
    N: int
    M: Fraction
    beta: Optional[Fraction] = None
    beta_mode: str = "imag"

    def __post_init__(self):
        if self.beta_mode not in ("imag", "ratio"):
            raise DomainError(f"beta_mode must be 'imag' or 'ratio', not {self.beta_mode!r}")
        if self.beta is not None and self.beta <= 0:
            raise DomainError("beta must be positive")


def poly_meta(p: UniPoly, beta=None, beta_mode: str = "imag") -> PolyMeta:
    if p.is_zero():
        raise DomainError("zero polynomial has no degree")
    return PolyMeta(p.degree, max_coeff(p), None if beta is None else as_rational(beta), beta_mode)


# --------------------------------------------------------------- text formats

_TERM = re.compile(
    r"""^(?P<coef>(\d+(\.\d*)?|\.\d+)(/\d+)?)?   # optional rational coefficient
        \*?
        (?P<var>[xX](\s*(\^|\*\*)\s*(?P<exp>\d+))?)?$""",
    re.VERBOSE,
)


def parse_poly(text: str) -> UniPoly:
    """Parse ``"3x^2 - 2x + 1"`` or the list form ``"[1, -2, 3]"`` (ascending)."""
    s = text.strip()
    if not s:
        raise DomainError("empty polynomial text")
    if s.startswith("["):
        if not s.endswith("]"):
            raise DomainError(f"unterminated list: {text!r}")
        body = s[1:-1].strip()
        if not body:
            return UniPoly()
        items = [t.strip().strip("'\"") for t in body.split(",")]
        return UniPoly(as_rational(t) for t in items)
    compact = re.sub(r"\s+", "", s)
    if compact[0] not in "+-":
        compact = "+" + compact
    acc: Dict[int, Fraction] = {}
    for sign, body in re.findall(r"([+-])([^+-]*)", compact):
        if not body:
            raise DomainError(f"dangling sign in {text!r}")
        m = _TERM.match(body)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise DomainError(f"cannot parse term {body!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("var") is None:
            power = 0
        else:
            power = int(m.group("exp")) if m.group("exp") else 1
        if sign == "-":
            coef = -coef
        acc[power] = acc.get(power, Fraction(0)) + coef
    if not acc:
        return UniPoly()
    out = [Fraction(0)] * (max(acc) + 1)
    for k, c in acc.items():
        out[k] = c
    return UniPoly(out)


def rational_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_list(p: UniPoly) -> str:
    return "[" + ", ".join(rational_str(c) for c in p.coeffs) + "]"


def format_poly(p: UniPoly, var: str = "x") -> str:
    """Human form, highest power first; round-trips through ``parse_poly``."""
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = rational_str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{rational_str(mag)}{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --------------------------------------------------------------- multivariate

Monomial = Tuple[int, ...]


def _grlex_key(e: Monomial):
    return (sum(e), e)


class MultiPoly:
    """Sparse polynomial in ``num_vars`` variables; terms kept in graded-lex order."""

    __slots__ = ("num_vars", "_t")

    def __init__(self, num_vars: int, terms=None):
        if num_vars < 0:
            raise DomainError("num_vars must be >= 0")
        acc: Dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != num_vars:
                raise DomainError(f"exponent {e} does not have length {num_vars}")
            if any(x < 0 for x in e):
                raise DomainError(f"negative exponent in {e}")
            acc[e] = acc.get(e, Fraction(0)) + as_rational(c)
        self.num_vars = num_vars
        self._t = {e: acc[e] for e in sorted(acc, key=_grlex_key) if acc[e] != 0}

    @classmethod
    def _raw(cls, num_vars: int, acc: Dict[Monomial, Fraction]) -> "MultiPoly":
        p = cls.__new__(cls)
        p.num_vars = num_vars
        p._t = {e: acc[e] for e in sorted(acc, key=_grlex_key) if acc[e] != 0}
        return p

    @classmethod
    def constant(cls, c, num_vars: int) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, i: int, num_vars: int) -> "MultiPoly":
        """The variable X_{i+1} (0-based ``i``)."""
        if not 0 <= i < num_vars:
            raise DomainError(f"variable index {i} out of range")
        e = [0] * num_vars
        e[i] = 1
        return cls(num_vars, {tuple(e): 1})

    @classmethod
    def from_univariate(cls, p: UniPoly, i: int, num_vars: int) -> "MultiPoly":
        terms = {}
        for k, c in enumerate(p.coeffs):
            if c:
                e = [0] * num_vars
                e[i] = k
                terms[tuple(e)] = c
        return cls(num_vars, terms)

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def coeff(self, e: Monomial) -> Fraction:
        return self._t.get(tuple(e), Fraction(0))

    def is_zero(self) -> bool:
        return not self._t

    def total_degree(self) -> Optional[int]:
        return max((sum(e) for e in self._t), default=None)

    def __len__(self):
        return len(self._t)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self._t == other._t

    def __hash__(self):
        return hash((self.num_vars, tuple(self._t.items())))

    def __repr__(self):
        return f"MultiPoly({self.num_vars}, {format_mpoly_terms(self)})"

    def __add__(self, other):
        return mpoly_add(self, other)

    def __sub__(self, other):
        return mpoly_add(self, -other)

    def __neg__(self):
        return MultiPoly._raw(self.num_vars, {e: -c for e, c in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return mpoly_mul(self, other)
        c = as_rational(other)
        return MultiPoly._raw(self.num_vars, {e: c * v for e, v in self._t.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(1, self.num_vars)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, *point):
        return mpoly_eval(self, point)


def _check_dims(a: MultiPoly, b: MultiPoly):
    if a.num_vars != b.num_vars:
        raise DomainError(f"dimension mismatch: {a.num_vars} vs {b.num_vars} variables")


def mpoly_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    _check_dims(a, b)
    acc = dict(a._t)
    for e, c in b._t.items():
        acc[e] = acc.get(e, Fraction(0)) + c
    return MultiPoly._raw(a.num_vars, acc)


def mpoly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    _check_dims(a, b)
    acc: Dict[Monomial, Fraction] = {}
    for ea, ca in a._t.items():
        for eb, cb in b._t.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            acc[e] = acc.get(e, Fraction(0)) + ca * cb
    return MultiPoly._raw(a.num_vars, acc)


def mpoly_eval(p: MultiPoly, point: Sequence) -> Fraction:
    if len(point) != p.num_vars:
        raise DomainError(f"point has {len(point)} coordinates, polynomial has {p.num_vars} variables")
    xs = [as_rational(x) for x in point]
    total = Fraction(0)
    for e, c in p._t.items():
        term = c
        for x, k in zip(xs, e):
            if k:
                term *= x ** k
        total += term
    return total


def format_mpoly_terms(p: MultiPoly) -> List[list]:
    """JSON-ready term list ``[["p/q", [e1, ..., eu]], ...]``."""
    return [[rational_str(c), list(e)] for e, c in p.items()]


def parse_mpoly(text_or_terms, num_vars: Optional[int] = None) -> MultiPoly:
    """Inverse of ``format_mpoly_terms``; accepts a JSON string or a term list."""
    terms = json.loads(text_or_terms) if isinstance(text_or_terms, str) else text_or_terms
    if not isinstance(terms, list):
        raise DomainError("multivariate polynomial must be a list of (coefficient, exponents) terms")
    parsed = []
    for item in terms:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise DomainError(f"bad term {item!r}")
        c, e = item
        parsed.append((tuple(e), as_rational(c)))
    if num_vars is None:
        if not parsed:
            raise DomainError("num_vars is required for an empty term list")
        num_vars = len(parsed[0][0])
    return MultiPoly(num_vars, parsed)
