import random
from fractions import Fraction

import pytest

from poscert.cofactor import (
    QuadraticFactor,
    build_cofactor,
    cofactor_degree,
    cofactor_run,
    floor_pi_times,
    negative_index,
    negative_index_exact,
    pi_estimate,
)
from poscert.errors import DomainError
from poscert.poly import UniPoly, mul

F = Fraction

TABLE = {
    1: 3, 2: 6, 3: 9, 4: 12, 6: 19, 8: 25, 9: 28, 12: 37, 13: 40, 15: 47, 19: 59, 20: 62,
    30: 94, 34: 106, 36: 113, 40: 125, 41: 128, 49: 153, 50: 157, 51: 160, 100: 314,
    200: 628, 1000: 3141, 10000: 31415,
}


@pytest.mark.parametrize("h,index", sorted(TABLE.items()))
def test_negative_index_table(h, index):
    assert negative_index(h) == index


@pytest.mark.parametrize("h", [h for h in TABLE if h <= 50])
def test_exact_recurrence_agrees(h):
    assert negative_index_exact(h, 1) == TABLE[h]


@pytest.mark.parametrize("h", [1, 2, 3, 5])
def test_ratio_only_dependence(h):
    a = negative_index_exact(h, 1)
    assert negative_index_exact(2 * h, 2) == a
    assert negative_index_exact(F(h, 2), F(1, 2)) == a
    assert negative_index(h) == a


def test_cofactor_degree_examples():
    assert cofactor_degree(1, 1) == 4
    assert cofactor_degree(1, 2) == 2
    assert cofactor_degree(100, 1) == 315


def test_floor_pi_times():
    assert floor_pi_times(1) == 3
    assert floor_pi_times(F(22, 7)) == 9
    assert floor_pi_times(10 ** 20) == 314159265358979323846
    with pytest.raises(DomainError):
        floor_pi_times(-1)


def test_build_cofactor_examples():
    r, prod = build_cofactor(1, 1)
    assert all(c > 0 for c in r.coeffs) and all(c > 0 for c in prod.coeffs)
    assert mul(UniPoly([2, -2, 1]), r) == prod
    assert r.degree <= cofactor_degree(1, 1) + 2

    r, prod = build_cofactor(1, 2)
    assert r.degree <= 2 and all(c > 0 for c in prod.coeffs)

    # the hand-checked cofactor from the recurrence example also works
    hand = UniPoly([F(9, 2), 5, 3, 1])
    assert all(c > 0 for c in mul(UniPoly([2, -2, 1]), hand).coeffs)


def test_quadratic_factor_validation():
    assert QuadraticFactor(1, 1).poly == UniPoly([2, -2, 1])
    for p, q in [(0, 1), (1, 0), (-1, 2)]:
        with pytest.raises(DomainError):
            QuadraticFactor(p, q)
    with pytest.raises(DomainError):
        negative_index(0)


def test_pi_estimate_examples():
    assert pi_estimate(1) == 3.0
    assert abs(pi_estimate(1000) - 3.141) < 1e-12
    assert abs(pi_estimate(100000) - 3.14159) <= 2e-5
    run = cofactor_run(100)
    assert (run.negative_index, run.pi_estimate) == (314, 3.14)


def test_random_cofactors_sound():
    rng = random.Random(2)
    for _ in range(15):
        q = F(rng.randint(1, 6), rng.randint(1, 3))
        p = q * F(rng.randint(1, 60), 6)
        r, prod = build_cofactor(p, q)
        assert all(c > 0 for c in r.coeffs)
        assert prod == mul(QuadraticFactor(p, q).poly, r)
        assert all(c > 0 for c in prod.coeffs)
        assert r.degree <= cofactor_degree(p, q) + 2
