import itertools
import random
from fractions import Fraction

import pytest

from poscert.errors import DomainError
from poscert.lp import (
    FEASIBLE,
    INFEASIBLE,
    LinearProgram,
    dump,
    load,
    solve_feasibility,
    solve_feasibility_guided,
    verify_farkas,
    verify_point,
)

F = Fraction


# ------------------------------------------------ vertex-enumeration oracle


def _solve_square(rows, rhs):
    """Exact Gauss-Jordan; None if singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return [m[i][n] for i in range(n)]


def _rank_columns(a, n):
    """Indices of a maximal set of linearly independent columns of ``a``."""
    cols = []
    basis = []  # echelon rows of the chosen columns, stored as column vectors
    for j in range(n):
        v = [row[j] for row in a]
        for piv, b in basis:
            if v[piv] != 0:
                f = v[piv] / b[piv]
                v = [x - f * y for x, y in zip(v, b)]
        piv = next((i for i, x in enumerate(v) if x != 0), None)
        if piv is not None:
            basis.append((piv, v))
            cols.append(j)
    return cols


def vertex_oracle(lp):
    """Feasibility of A x >= b by enumerating basic solutions.

    Rows include the variable bounds. If A lacks full column rank the other
    columns are fixed to 0, which loses nothing: A x ranges over the span of
    the chosen columns either way, and the reduced polyhedron is pointed.
    """
    rows = [(list(c), r) for c, r in lp.constraints]
    for j, lb in enumerate(lp.var_lower_bounds):
        if lb is not None:
            e = [F(0)] * lp.num_vars
            e[j] = F(1)
            rows.append((e, lb))
    a = [r for r, _ in rows]
    cols = _rank_columns(a, lp.num_vars)
    if not cols:
        return all(b <= 0 for _, b in rows)
    sub = [[r[j] for j in cols] for r in a]
    for pick in itertools.combinations(range(len(rows)), len(cols)):
        y = _solve_square([sub[i] for i in pick], [rows[i][1] for i in pick])
        if y is None:
            continue
        x = [F(0)] * lp.num_vars
        for j, v in zip(cols, y):
            x[j] = v
        if verify_point(lp, x):
            return True
    return False


def random_lp(rng, max_vars=4, max_rows=8):
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_rows)
    rows = tuple(
        (tuple(F(rng.randint(-5, 5)) for _ in range(n)), F(rng.randint(-5, 5))) for _ in range(m)
    )
    bounds = tuple(rng.choice([None, F(0), F(rng.randint(-3, 3))]) for _ in range(n))
    return LinearProgram(n, rows, bounds)


def random_lps(count=200, seed=11):
    rng = random.Random(seed)
    return [random_lp(rng) for _ in range(count)]


# ------------------------------------------------------------ examples


def test_contradiction_infeasible():
    lp = LinearProgram.from_rows(1, [([1], ">=", 1), ([-1], ">=", 0)])
    out = solve_feasibility(lp)
    assert out.status == INFEASIBLE
    assert verify_farkas(lp, out.farkas)


def test_simple_feasible():
    lp = LinearProgram.from_rows(2, [([1, 1], ">=", 1)], [0, 0])
    out = solve_feasibility(lp)
    assert out.status == FEASIBLE and verify_point(lp, out.point)


def test_triangle_against_grid():
    # x >= 0, y >= 0, x + y <= 2: a triangle with interior
    lp = LinearProgram.from_rows(2, [([1, 0], ">=", 0), ([0, 1], ">=", 0), ([1, 1], "<=", 2)])
    out = solve_feasibility(lp)
    assert out.feasible and verify_point(lp, out.point)
    grid = [F(i, 4) for i in range(-8, 17)]
    assert any(verify_point(lp, (x, y)) for x in grid for y in grid)


def test_equality_rows_and_errors():
    lp = LinearProgram.from_rows(2, [([1, 1], "==", 3), ([1, -1], "==", 1)])
    out = solve_feasibility(lp)
    assert out.feasible and tuple(out.point) == (2, 1)
    with pytest.raises(DomainError):
        LinearProgram(2, (((1,), 0),))
    with pytest.raises(DomainError):
        LinearProgram.from_rows(1, [([1], ">", 0)])
    with pytest.raises(DomainError):
        LinearProgram(1, (((1,), 0),), (0, 0))
    with pytest.raises(DomainError):
        solve_feasibility(lp, pivot_rule="steepest")


def test_farkas_hint_short_circuits():
    lp = LinearProgram.from_rows(1, [([1], ">=", 1), ([-1], ">=", 0)])
    out = solve_feasibility(lp, farkas_hint=[1, 1])
    assert out.status == INFEASIBLE and out.stats.get("hint")
    out = solve_feasibility(lp, farkas_hint=[1, 0])  # not a proof: ignored
    assert out.status == INFEASIBLE and not out.stats.get("hint")


# ------------------------------------------------------------ properties


def test_matches_vertex_oracle():
    for lp in random_lps():
        out = solve_feasibility(lp)
        assert out.feasible == vertex_oracle(lp), dump(lp)
        if out.feasible:
            assert verify_point(lp, out.point)
        else:
            assert verify_farkas(lp, out.farkas)


def test_pivot_rules_agree():
    for lp in random_lps(count=100, seed=3):
        a = solve_feasibility(lp, pivot_rule="bland")
        b = solve_feasibility(lp, pivot_rule="dantzig")
        assert a.status == b.status


def test_deterministic():
    for lp in random_lps(count=50, seed=5):
        assert solve_feasibility(lp) == solve_feasibility(lp)


def test_dump_load_round_trip():
    for lp in random_lps(count=50, seed=9):
        assert load(dump(lp)) == lp
    with pytest.raises(DomainError):
        load("1 >= 0\n")


def test_guided_agrees_with_exact():
    checked = 0
    for lp in random_lps(count=200, seed=13):
        guided = solve_feasibility_guided(lp)
        if guided is None:
            continue
        checked += 1
        assert guided.status == solve_feasibility(lp).status
        if guided.feasible:
            assert verify_point(lp, guided.point)
        else:
            assert verify_farkas(lp, guided.farkas)
    assert checked >= 150
