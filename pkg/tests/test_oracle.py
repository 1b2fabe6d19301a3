import cmath
import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from poscert.errors import DomainError
from poscert.oracle import (
    INF,
    beta_estimate,
    coefficient_bounds,
    complex_roots,
    components_product,
    has_positive_real_root,
    has_real_root,
    quadratic_components,
    ratio_bound_diagnostic,
    squarefree_parts,
    sturm_chain,
    sturm_count,
)
from poscert.poly import UniPoly, mul, square

F = Fraction
SQRT3_2 = math.sqrt(3) / 2


def P(*cs):
    return UniPoly(cs)


def from_roots(roots):
    out = P(1)
    for r in roots:
        out = mul(out, P(-r, 1))
    return out


def test_sturm_count_examples():
    assert sturm_count(P(-2, 0, 1), 0, INF) == 1
    assert sturm_count(P(1, 0, 1), -INF, INF) == 0
    assert sturm_count(P(-6, 11, -6, 1), 0, INF) == 3
    with pytest.raises(DomainError):
        sturm_count(UniPoly())
    with pytest.raises(DomainError):
        sturm_count(P(1, 1), 2, 1)


def test_sturm_half_open_interval():
    p = from_roots([1, 2, 3])
    assert sturm_count(p, 1, 3) == 2  # (1, 3] holds 2 and 3
    assert sturm_count(p, F(1, 2), F(3, 2)) == 1
    assert len(sturm_chain(p)) <= p.degree + 1


def test_has_positive_real_root_examples():
    assert has_positive_real_root(P(-1, 1))
    assert not has_positive_real_root(P(1, -1, 1))
    assert not has_positive_real_root(P(2, 3, 1))


def close_sets(got, expected, tol=1e-9):
    got = sorted(got, key=lambda z: (round(z.real, 6), z.imag))
    expected = sorted(expected, key=lambda z: (round(z.real, 6), z.imag))
    return len(got) == len(expected) and all(abs(a - b) < tol for a, b in zip(got, expected))


def test_complex_roots_examples():
    assert close_sets(complex_roots(P(1, 0, 1)).roots, [1j, -1j])
    assert close_sets(complex_roots(P(2, -2, 1)).roots, [1 + 1j, 1 - 1j])
    assert close_sets(complex_roots(P(1, -1, 1)).roots, [0.5 + SQRT3_2 * 1j, 0.5 - SQRT3_2 * 1j])
    with pytest.raises(DomainError):
        complex_roots(P(3))


def test_complex_roots_repeated():
    p = from_roots([1, 1, 1, -2]) * P(1, 0, 1) ** 2
    rs = complex_roots(p)
    assert len(rs) == p.degree
    assert close_sets(rs.roots, [1, 1, 1, -2, 1j, 1j, -1j, -1j], tol=1e-8)


def test_beta_examples():
    assert beta_estimate(P(1, 0, 1)).value == pytest.approx(1.0, abs=1e-12)
    assert beta_estimate(P(1, -1, 1)).value == pytest.approx(SQRT3_2, abs=1e-12)
    est = beta_estimate(P(2, -3, 1))
    assert not est.applicable
    ratio = beta_estimate(P(2, -2, 1), "ratio")
    assert ratio.applicable and ratio.value == pytest.approx(1.0)
    assert not beta_estimate(P(1, 0, 1), "ratio").applicable  # purely imaginary roots
    with pytest.raises(DomainError):
        beta_estimate(P(1, 0, 1), "bogus")


def test_quadratic_components_examples():
    def approx(comps, expected):
        return len(comps) == len(expected) and all(
            abs(a - c) < 1e-9 and abs(b - d) < 1e-9 for (a, b), (c, d) in zip(comps, expected)
        )

    assert approx(quadratic_components(P(1, 0, 1)), [(0, 1), (0, 1)])
    assert approx(quadratic_components(P(-1, 1)), [(1, 0)])
    assert approx(quadratic_components(P(2, -2, 1)), [(1, 1), (1, 1)])


@pytest.mark.parametrize("p", [P(1, 0, 1), P(2, -2, 1), P(-6, 11, -6, 1), P(1, -1, 1, 0, 2)])
def test_components_multiply_to_square(p):
    prod = components_product(quadratic_components(p))
    want = [float(c / p.leading ** 2) for c in square(p).coeffs]
    assert prod == pytest.approx(want, abs=1e-7)


def test_sturm_matches_constructed_roots():
    values = range(-3, 4)
    for n in range(1, 6):
        for roots in itertools.combinations_with_replacement(values, n):
            p = from_roots(roots)
            assert sturm_count(p) == len(set(roots))
            assert sturm_count(p, 0, INF) == len({r for r in roots if r > 0})


def test_squarefree_parts():
    p = from_roots([1, 2, 2, 3, 3, 3]).scale(5)
    parts = squarefree_parts(p)
    assert parts == [(P(-1, 1), 1), (P(-2, 1), 2), (P(-3, 1), 3)]


def test_residual_and_conjugate_closure(corpus):
    for p in corpus:
        if p.degree < 1:
            continue
        rs = complex_roots(p)
        assert rs.residual <= 1e-8, p
        assert len(rs) == p.degree
        ups = sorted((z for z in rs if z.imag > 0), key=lambda z: (z.real, z.imag))
        downs = sorted((z.conjugate() for z in rs if z.imag < 0), key=lambda z: (z.real, z.imag))
        assert len(ups) == len(downs)
        assert all(abs(a - b) <= 1e-8 for a, b in zip(ups, downs))


def test_real_root_preserved_by_squaring(corpus):
    for p in corpus:
        assert has_real_root(p) == has_real_root(square(p))


def test_ratio_diagnostic_on_corpus(corpus):
    # beta comes from the same roots, so the bound reduces to arithmetic on them
    for p in corpus[::7]:
        if p.degree < 1:
            continue
        d = ratio_bound_diagnostic(p)
        if d.within_bound is not None:
            assert d.within_bound, p


def test_coefficient_bounds():
    cb = coefficient_bounds(P(1, -1, 1))
    assert cb.K == 4 and cb.L == 3
    assert cb.upper == 12 and cb.lower == F(1, 24)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4), st.integers(0, 2))
def test_complex_roots_recover_integers(roots, pairs):
    p = from_roots(roots) * P(1, 0, 1) ** pairs
    rs = complex_roots(p)
    expected = [complex(r) for r in roots] + [1j, -1j] * pairs
    for z in expected:
        assert min(abs(z - w) for w in rs) < 1e-6
    assert all(abs(cmath.polar(w)[0]) < 10 for w in rs)
