import random
from fractions import Fraction

import pytest

from conftest import random_formulas
from poscert.errors import DomainError, ResourceError
from poscert.poly import MultiPoly, UniPoly, mpoly_eval
from poscert.sat import (
    DENSE,
    ORTHANT,
    CnfFormula,
    UnsatCertificate,
    brute_force_sat,
    certificate_lp,
    certificate_size,
    clause_polynomial,
    encode,
    find_unsat_certificate,
    format_dimacs,
    hypercube_zero,
    monomials_up_to,
    parse_dimacs,
    pin_polynomials,
    point_to_assignment,
    search_unsat_certificate,
    verify_unsat_certificate,
)

F = Fraction

# first d at which the complete 8-clause instance on 3 variables has a certificate
FIRST_FEASIBLE_D = {DENSE: 9, ORTHANT: 7}


def lin_sq(c, i, u):
    lin = MultiPoly.from_univariate(UniPoly([-c, 1]), i, u)
    return lin * lin


# ------------------------------------------------------------ parsing


def test_parse_examples():
    f = parse_dimacs("p cnf 3 1 \n 1 2 3 0")
    assert f.to_ints() == [[1, 2, 3]]
    f = parse_dimacs("c comment\np cnf 3 1 \n -1 2 -3 0")
    assert f.clauses == (((1, True), (2, False), (3, True)),)
    assert parse_dimacs(format_dimacs(f)) == f


@pytest.mark.parametrize(
    "text",
    [
        "p cnf 3 1\n1 2 0",  # width 2
        "p cnf 3 1\n1 2 3 4 0",  # width 4
        "p cnf 3 1\n1 2 5 0",  # index out of range
        "p dnf 3 1\n1 2 3 0",  # malformed header
        "1 2 3 0",  # missing header
        "p cnf 3 2\n1 2 3 0",  # declared count mismatch
        "p cnf 3 1\n1 two 3 0",
    ],
)
def test_parse_errors(text):
    with pytest.raises(DomainError):
        parse_dimacs(text)


def test_formula_invariants():
    with pytest.raises(DomainError):
        CnfFormula.from_ints(3, [])
    with pytest.raises(DomainError):
        CnfFormula.from_ints(0, [[1, 2, 3]])
    with pytest.raises(DomainError):
        CnfFormula.from_ints(2, [[1, 2, 3]])


# ------------------------------------------------------------ encoding


def test_encode_examples():
    u = 3
    f = CnfFormula.from_ints(u, [[1, 2, 3]])
    assert encode(f) == lin_sq(2, 0, u) * lin_sq(2, 1, u) * lin_sq(2, 2, u)
    f = CnfFormula.from_ints(u, [[-1, 2, -3]])
    assert encode(f) == lin_sq(1, 0, u) * lin_sq(2, 1, u) * lin_sq(1, 2, u)


def test_two_clause_encoding_by_evaluation():
    f = CnfFormula.from_ints(3, [[1, -2, 3], [-1, -2, -3]])
    q = encode(f)
    rng = random.Random(0)
    for _ in range(20):
        pt = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
        direct = F(0)
        for clause in f.clauses:
            term = F(1)
            for v, neg in clause:
                term *= (pt[v - 1] - (1 if neg else 2)) ** 2
            direct += term
        assert mpoly_eval(q, pt) == direct
    assert all(c.denominator == 1 for _, c in q.items())


def test_pins():
    (pin,) = pin_polynomials(1)
    assert pin == MultiPoly(1, {(4,): 1, (3,): -6, (2,): 13, (1,): -12, (0,): 4})
    for p in pin_polynomials(3):
        i = next(k for k, e in enumerate(max(p.terms)) if e)
        pt = [F(7)] * 3
        for v, want in ((1, 0), (2, 0), (F(3, 2), F(1, 16))):
            pt[i] = F(v)
            assert mpoly_eval(p, pt) == want
    with pytest.raises(DomainError):
        pin_polynomials(0)


# --------------------------------------------------------- brute force


def test_brute_examples(unsat8):
    res = brute_force_sat(CnfFormula.from_ints(3, [[1, 2, 3], [-1, -2, -3]]))
    assert res.sat
    assert CnfFormula.from_ints(3, [[1, 2, 3], [-1, -2, -3]]).satisfied_by(res.assignment)
    assert not brute_force_sat(unsat8).sat
    assert brute_force_sat(CnfFormula.from_ints(3, [[1, -2, 3]])).sat
    with pytest.raises(ResourceError):
        brute_force_sat(CnfFormula.from_ints(25, [[1, 2, 3]]))


def test_hypercube_examples(unsat8):
    q = encode(CnfFormula.from_ints(3, [[1, 2, 3]]))
    assert mpoly_eval(q, (2, 1, 1)) == 0
    assert hypercube_zero(encode(unsat8), 3) is None
    with pytest.raises(DomainError):
        hypercube_zero(q, 4)


def test_grid_correspondence():
    rng = random.Random(1)
    for f in random_formulas(count=200, seed=3):
        q = encode(f)
        zero = hypercube_zero(q, f.u)
        res = brute_force_sat(f)
        assert (zero is not None) == res.sat
        if zero is not None:
            assert f.satisfied_by(point_to_assignment(zero))
        for _ in range(20):
            pt = [F(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(f.u)]
            assert mpoly_eval(q, pt) >= 0


# --------------------------------------------------------- certificates


def test_monomials_and_sizes():
    assert monomials_up_to(2, 1) == [(0, 0), (0, 1), (1, 0)]
    assert len(monomials_up_to(3, 4)) == 35
    assert certificate_size(3, 2) == (40, 84)
    lp, monos, gens, basis = certificate_lp(CnfFormula.from_ints(3, [[1, 2, 3]]), 1)
    assert lp.num_vars == 4 * 4 and len(gens) == 4 and len(basis) == 4
    assert max(sum(m) for m in monos) == 7
    with pytest.raises(DomainError):
        certificate_lp(CnfFormula.from_ints(3, [[1, 2, 3]]), 1, band="sparse")
    with pytest.raises(ResourceError):
        certificate_lp(CnfFormula.from_ints(3, [[1, 2, 3]]), 40)


@pytest.fixture(scope="module")
def dense_cert(unsat8):
    run = find_unsat_certificate(unsat8, FIRST_FEASIBLE_D[DENSE])
    assert run.certificate is not None
    return run.certificate


@pytest.mark.parametrize("band", [DENSE, ORTHANT])
def test_first_feasible_degree(unsat8, band):
    runs = search_unsat_certificate(unsat8, FIRST_FEASIBLE_D[band], band=band)
    assert [r.d for r in runs] == list(range(FIRST_FEASIBLE_D[band] + 1))
    assert all(r.certificate is None for r in runs[:-1])
    cert = runs[-1].certificate
    assert cert is not None and cert.band == band
    assert verify_unsat_certificate(unsat8, cert)
    assert not brute_force_sat(unsat8).sat


def test_exact_and_guided_agree_below_threshold(unsat8):
    for d in (2, 3):
        a = find_unsat_certificate(unsat8, d, method="simplex")
        b = find_unsat_certificate(unsat8, d, method="guided")
        assert a.certificate is None and b.certificate is None
        assert a.proof == "simplex-farkas" and b.method in ("guided", "simplex")


def test_satisfiable_formulas_have_no_certificate():
    sat = [f for f in random_formulas(count=60, seed=21) if brute_force_sat(f).sat]
    assert len(sat) >= 40
    for f in sat:
        for d in (0, 1, 2):
            run = find_unsat_certificate(f, d)
            assert run.certificate is None
            hinted = find_unsat_certificate(f, d, use_evaluation_hint=True)
            assert hinted.proof == "evaluation-farkas"


def test_degree_zero_always_infeasible(unsat8):
    for f in [unsat8] + random_formulas(count=20, seed=8):
        assert find_unsat_certificate(f, 0).certificate is None


def test_tampering_detected(unsat8, dense_cert):
    assert verify_unsat_certificate(unsat8, dense_cert)
    terms = dense_cert.P.terms
    first = next(iter(terms))
    terms[first] = F(0)
    bad = UnsatCertificate(dense_cert.K, dense_cert.K_i, MultiPoly(3, terms), dense_cert.degree_bound_used)
    assert not verify_unsat_certificate(unsat8, bad)

    other = CnfFormula.from_ints(3, unsat8.to_ints()[:-1])
    assert not verify_unsat_certificate(other, dense_cert)

    shifted = UnsatCertificate(
        dense_cert.K, dense_cert.K_i, dense_cert.P - MultiPoly.constant(dense_cert.P.coeff((0, 0, 0)), 3),
        dense_cert.degree_bound_used,
    )
    assert not verify_unsat_certificate(unsat8, shifted)


def test_certificate_shape(dense_cert):
    assert all(c >= 1 for _, c in dense_cert.P.items())
    assert all(dense_cert.P.coeff(m) >= 1 for m in monomials_up_to(3, dense_cert.dense_degree))
    assert len(dense_cert.K_i) == 3


def test_clause_polynomial_vanishes_on_satisfied_points():
    clause = ((1, False), (2, True), (3, False))
    q = clause_polynomial(clause, 3)
    for pt in [(2, 2, 2), (1, 1, 1), (1, 2, 2)]:
        assert mpoly_eval(q, pt) == 0
    assert mpoly_eval(q, (1, 2, 1)) == 1  # the only falsifying assignment
