"""Exact rational linear feasibility.

Problems are ``A x >= b`` with optional per-variable lower bounds
(``None`` marks a free variable). ``solve_feasibility`` runs a phase-one
simplex on an integer-preserving tableau (every entry is an integer over a
single shared denominator, so no gcds and no rounding), after pivoting the
free variables out by Gauss-Jordan elimination.

Both outcomes carry a checkable witness: a feasible point, or a Farkas
multiplier vector ``lam >= 0`` with ``lam^T A`` zero on free columns and
``<= 0`` on bounded ones while ``lam^T b`` exceeds what any admissible ``x``
can reach. ``verify_point`` and ``verify_farkas`` re-check either in exact
arithmetic.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from . import kernels
from .errors import DomainError, ResourceError
from .poly import as_rational, rational_str

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"

DEFAULT_MAX_CELLS = 4_000_000


@dataclass(frozen=True)
class LinearProgram:
    """``constraints[i] = (coeffs, rhs)`` means ``coeffs . x >= rhs``."""

    num_vars: int
    constraints: Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]
    var_lower_bounds: Tuple[Optional[Fraction], ...] = ()

    def __post_init__(self):
        rows = []
        for row in self.constraints:
            coeffs, rhs = row
            coeffs = tuple(as_rational(c) for c in coeffs)
            if len(coeffs) != self.num_vars:
                raise DomainError(
                    f"constraint has {len(coeffs)} coefficients, program has {self.num_vars} variables"
                )
            rows.append((coeffs, as_rational(rhs)))
        object.__setattr__(self, "constraints", tuple(rows))
        bounds = self.var_lower_bounds or (None,) * self.num_vars
        if len(bounds) != self.num_vars:
            raise DomainError(f"{len(bounds)} lower bounds for {self.num_vars} variables")
        object.__setattr__(
            self, "var_lower_bounds", tuple(None if b is None else as_rational(b) for b in bounds)
        )

    @classmethod
    def from_rows(cls, num_vars: int, rows, lower_bounds=None) -> "LinearProgram":
        """Build from ``(coeffs, relation, rhs)`` rows, relation in ``>=``, ``<=``, ``==``."""
        out = []
        for coeffs, rel, rhs in rows:
            coeffs = [as_rational(c) for c in coeffs]
            rhs = as_rational(rhs)
            if rel == ">=":
                out.append((coeffs, rhs))
            elif rel == "<=":
                out.append(([-c for c in coeffs], -rhs))
            elif rel in ("==", "="):
                out.append((coeffs, rhs))
                out.append(([-c for c in coeffs], -rhs))
            else:
                raise DomainError(f"unknown relation {rel!r}")
        return cls(num_vars, tuple((tuple(c), r) for c, r in out), tuple(lower_bounds or ()))

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)


@dataclass(frozen=True)
class LpOutcome:
    status: str
    point: Optional[Tuple[Fraction, ...]] = None
    farkas: Optional[Tuple[Fraction, ...]] = None
    pivots: int = 0
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def verify_point(lp: LinearProgram, x: Sequence) -> bool:
    if len(x) != lp.num_vars:
        return False
    x = [as_rational(v) for v in x]
    for lb, v in zip(lp.var_lower_bounds, x):
        if lb is not None and v < lb:
            return False
    for coeffs, rhs in lp.constraints:
        if sum((c * v for c, v in zip(coeffs, x) if c), Fraction(0)) < rhs:
            return False
    return True


def verify_farkas(lp: LinearProgram, lam: Sequence) -> bool:
    """True iff ``lam`` proves that no admissible ``x`` satisfies the program."""
    if len(lam) != lp.num_constraints:
        return False
    lam = [as_rational(v) for v in lam]
    if any(v < 0 for v in lam):
        return False
    combo = [Fraction(0)] * lp.num_vars
    rhs_total = Fraction(0)
    for y, (coeffs, rhs) in zip(lam, lp.constraints):
        if y:
            rhs_total += y * rhs
            for j, c in enumerate(coeffs):
                if c:
                    combo[j] += y * c
    reachable = Fraction(0)  # sup of combo . x over admissible x
    for c, lb in zip(combo, lp.var_lower_bounds):
        if lb is None:
            if c != 0:
                return False
        else:
            if c > 0:
                return False
            reachable += c * lb
    return rhs_total > reachable


def _integer_row(values: Sequence[Fraction]) -> Tuple[List[int], int]:
    scale = 1
    for v in values:
        if v.denominator != 1:
            scale = lcm(scale, v.denominator)
    return [int(v * scale) for v in values], scale


def solve_feasibility(
    lp: LinearProgram,
    farkas_hint: Optional[Sequence] = None,
    pivot_rule: str = "dantzig",
    max_cells: int = DEFAULT_MAX_CELLS,
) -> LpOutcome:
    """Decide ``A x >= b`` (with bounds) exactly.

    ``pivot_rule="bland"`` uses Bland's smallest-index rule throughout;
    the default ``"dantzig"`` prices by most negative reduced cost but falls
    back to Bland's rule after any degenerate pivot, which keeps it
    cycle-free. A ``farkas_hint`` that verifies short-circuits to infeasible.
    """
    if pivot_rule not in ("bland", "dantzig"):
        raise DomainError(f"unknown pivot rule {pivot_rule!r}")
    if farkas_hint is not None and verify_farkas(lp, farkas_hint):
        return LpOutcome(INFEASIBLE, farkas=tuple(as_rational(v) for v in farkas_hint),
                         stats={"hint": True})

    n, m = lp.num_vars, lp.num_constraints
    bounds = lp.var_lower_bounds
    free_vars = [j for j in range(n) if bounds[j] is None]
    nonneg_vars = [j for j in range(n) if bounds[j] is not None]
    nf, nb = len(free_vars), len(nonneg_vars)
    ncols = nf + nb + m + 1  # free | shifted bounded | slacks | rhs
    if (m + 1) * ncols > max_cells:
        raise ResourceError(
            f"LP too large: {n} variables, {m} constraints ({(m + 1) * ncols} tableau cells > {max_cells})"
        )

    # x_j = lb_j + x'_j for bounded variables; each row a.x - s = b, scaled to integers
    rows: List[List[int]] = []
    for i, (coeffs, rhs) in enumerate(lp.constraints):
        shifted = rhs - sum((coeffs[j] * bounds[j] for j in nonneg_vars if coeffs[j]), Fraction(0))
        vals = [coeffs[j] for j in free_vars] + [coeffs[j] for j in nonneg_vars] + [shifted]
        ints, scale = _integer_row(vals)
        row = ints[:-1] + [0] * m + [ints[-1]]
        row[nf + nb + i] = -scale
        rows.append(row)
    d = 1
    pivots = 0

    # phase 0: pivot free variables into the basis; their rows leave the problem
    free_rows = {}
    active = list(range(m))
    for c in range(nf):
        r = next((i for i in active if rows[i][c] != 0), None)
        if r is None:
            continue
        if rows[r][c] < 0:
            rows[r] = [-v for v in rows[r]]
        d = kernels.fraction_free_pivot(rows, r, c, d)
        pivots += 1
        free_rows[c] = r
        active.remove(r)

    off = nf
    width = nb + m  # nonneg columns of the reduced problem (shifted vars, then slacks)
    tab = []
    for i in active:
        row = rows[i][off:]
        if row[-1] < 0:
            row = [-v for v in row]
        tab.append(row)
    obj = [0] * (width + 1)
    for row in tab:
        for j, v in enumerate(row):
            if v:
                obj[j] -= v
    tab.append(obj)
    k = len(tab) - 1
    basis = [width + i for i in range(k)]  # artificial ids sit after the real columns

    degenerate = False
    while True:
        obj = tab[k]
        if pivot_rule == "bland" or degenerate:
            enter = next((j for j in range(width) if obj[j] < 0), None)
        else:
            enter = None
            best = 0
            for j in range(width):
                if obj[j] < best:
                    best = obj[j]
                    enter = j
        if enter is None:
            break
        leave = None
        for i in range(k):
            a = tab[i][enter]
            if a > 0:
                if leave is None:
                    leave = i
                    continue
                # compare rhs_i / a with rhs_leave / a_leave, ties by smaller basis id
                lhs = tab[i][width] * tab[leave][enter]
                rhs = tab[leave][width] * a
                if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                    leave = i
        if leave is None:  # cannot happen: phase-one objective is bounded below
            raise AssertionError("phase-one ray found; tableau is corrupt")
        degenerate = tab[leave][width] == 0
        d = kernels.fraction_free_pivot(tab, leave, enter, d)
        basis[leave] = enter
        pivots += 1

    obj = tab[k]
    stats = {"pivots": pivots, "rows": m, "cols": n, "free_eliminated": len(free_rows)}
    if obj[width] < 0:
        # reduced costs of the slack columns are the multipliers on the original rows
        lam = tuple(Fraction(obj[nb + i], d) for i in range(m))
        return LpOutcome(INFEASIBLE, farkas=lam, pivots=pivots, stats=stats)

    z = [Fraction(0)] * width
    for i, b in enumerate(basis):
        if b < width:
            z[b] = Fraction(tab[i][width], d)
    x: List[Fraction] = [Fraction(0)] * n
    for pos, j in enumerate(nonneg_vars):
        x[j] = bounds[j] + z[pos]
    for c, r in free_rows.items():
        row = rows[r]
        acc = Fraction(row[-1])
        for j in range(width):
            if row[off + j] and z[j]:
                acc -= row[off + j] * z[j]
        x[free_vars[c]] = acc / row[c]
    return LpOutcome(FEASIBLE, point=tuple(x), pivots=pivots, stats=stats)


# ------------------------------------------------------------- debug dump


def dump(lp: LinearProgram) -> str:
    """One constraint per line (``c1 c2 ... >= rhs``), then a ``bounds`` line."""
    lines = [f"vars {lp.num_vars}"]
    for coeffs, rhs in lp.constraints:
        lines.append(" ".join(rational_str(c) for c in coeffs) + " >= " + rational_str(rhs))
    lines.append("bounds " + " ".join("free" if b is None else rational_str(b) for b in lp.var_lower_bounds))
    return "\n".join(lines) + "\n"


def load(text: str) -> LinearProgram:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("vars "):
        raise DomainError("dump must start with 'vars <n>'")
    n = int(lines[0].split()[1])
    rows = []
    bounds = None
    for ln in lines[1:]:
        if ln.startswith("bounds"):
            toks = ln.split()[1:]
            bounds = [None if t == "free" else Fraction(t) for t in toks]
            continue
        lhs, rhs = ln.split(">=")
        rows.append((tuple(Fraction(t) for t in lhs.split()), Fraction(rhs.strip())))
    return LinearProgram(n, tuple(rows), tuple(bounds or ()))


# ------------------------------------------------- float-guided, exactly snapped


def _as_free_rows(lp: LinearProgram):
    # bounds become ordinary rows x_j >= lb_j so every variable is free
    rows = [(list(coeffs), rhs) for coeffs, rhs in lp.constraints]
    for j, lb in enumerate(lp.var_lower_bounds):
        if lb is not None:
            e = [Fraction(0)] * lp.num_vars
            e[j] = Fraction(1)
            rows.append((e, lb))
    return rows


def _float_lp(c, a_ub, b_ub, a_eq, b_eq, bounds):
    from scipy.optimize import linprog

    for method in ("highs-ds", "highs-ipm", "highs"):
        res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method=method)
        if res.status in (0, 2):
            return res
    return None


def _snap(system: List[List[Fraction]], rhs: List[Fraction], guess: Sequence[float], grid: int):
    """Exact solution of ``system y = rhs`` closest in spirit to ``guess``.

    Non-pivot coordinates are the guess rounded to ``1/grid``; pivot
    coordinates are then solved exactly from the reduced row echelon form.
    """
    import flint

    n = len(guess)
    y = [Fraction(round(g * grid), grid) for g in guess]
    if not system:
        return y
    flat = []
    for row, r in zip(system, rhs):
        flat.extend(row)
        flat.append(r)
    mat = flint.fmpq_mat(len(system), n + 1, [flint.fmpq(v.numerator, v.denominator) for v in flat])
    red, rank = mat.rref()
    entries = red.tolist()
    pivots = [next(k for k in range(n + 1) if entries[i][k] != 0) for i in range(rank)]
    if pivots and pivots[-1] == n:  # a row 0 = nonzero: the equalities are inconsistent
        return None
    pivset = set(pivots)
    for i, j in enumerate(pivots):
        row = entries[i]
        acc = Fraction(int(row[n].p), int(row[n].q))
        for k in range(n):
            if k not in pivset and row[k] != 0:
                acc -= Fraction(int(row[k].p), int(row[k].q)) * y[k]
        y[j] = acc
    return y


SNAP_TOLERANCES = (1e-7, 1e-9, 1e-5, 1e-11)


def _primal_candidates(a, b, scale):
    """Float points of ``A x >= b``; the first ones leave slack on every non-forced row."""
    import numpy as np

    m, n = a.shape
    a_ub = np.hstack([-a, np.eye(m)]) / scale[:, None]
    c = np.concatenate([np.zeros(n), -np.ones(m)])
    out, infeasible = [], False
    for cap in (1.0, 1e-3):
        res = _float_lp(c, a_ub, -b / scale, None, None, [(None, None)] * n + [(0, cap)] * m)
        if res is not None and res.status == 0:
            out.append(res.x[:n])
        elif res is not None:
            infeasible = True
    res = _float_lp(np.zeros(n), -a / scale[:, None], -b / scale, None, None, [(None, None)] * n)
    if res is not None and res.status == 0:
        out.append(res.x)
    elif res is not None:
        infeasible = True
    return out, infeasible


def _farkas_candidate(a, b, scale):
    import numpy as np

    m, n = a.shape
    a_eq = np.vstack([(a / scale[:, None]).T, (b / scale)[None, :]])
    b_eq = np.concatenate([np.zeros(n), [1.0]])
    res = _float_lp(np.ones(m), None, None, a_eq, b_eq, [(0, None)] * m)
    if res is None or res.status != 0:
        return None
    return res.x / scale


def solve_feasibility_guided(lp: LinearProgram, grid: int = 2 ** 30) -> Optional[LpOutcome]:
    """Decide ``lp`` with a floating-point LP, then snap the answer to an exact witness.

    Feasible side: rows the float point leaves (nearly) tight are solved as
    exact equalities, the rest keep the float values rounded to ``1/grid``.
    Infeasible side: a float Farkas vector fixes a support on which an exact
    one is solved for. Either witness is re-checked with ``verify_point`` /
    ``verify_farkas``; ``None`` means nothing verified and the caller should
    fall back to ``solve_feasibility``.
    """
    import numpy as np

    rows = _as_free_rows(lp)
    n, m = lp.num_vars, len(rows)
    a = np.array([[float(c) for c in coeffs] for coeffs, _ in rows], dtype=float).reshape(m, n)
    b = np.array([float(r) for _, r in rows])
    scale = np.abs(a).max(axis=1) if n else np.ones(m)
    scale[scale == 0] = 1.0

    def try_primal(candidates):
        for x in candidates:
            resid = (a @ x - b) / scale
            size = max(1.0, float(np.abs(x).max()) if n else 1.0)
            for tol in SNAP_TOLERANCES:
                tight = [i for i in range(m) if resid[i] < tol * size]
                point = _snap([rows[i][0] for i in tight], [rows[i][1] for i in tight], x, grid)
                if point is not None and verify_point(lp, point):
                    return LpOutcome(FEASIBLE, point=tuple(point), stats={"method": "guided", "tight": len(tight)})
        return None

    def try_dual():
        lam = _farkas_candidate(a, b, scale)
        if lam is None:
            return None
        top = float(lam.max())
        for tol in SNAP_TOLERANCES:
            support = [i for i in range(m) if lam[i] > tol * top]
            system = [[rows[i][0][j] for i in support] for j in range(n)]
            system.append([rows[i][1] for i in support])
            rhs = [Fraction(0)] * n + [Fraction(1)]
            sub = _snap(system, rhs, [lam[i] for i in support], grid)
            if sub is None or any(v < 0 for v in sub):
                continue
            full = [Fraction(0)] * m
            for i, v in zip(support, sub):
                full[i] = v
            # multipliers on the bound rows are implied by the bounds themselves
            farkas = full[: lp.num_constraints]
            if verify_farkas(lp, farkas):
                return LpOutcome(INFEASIBLE, farkas=tuple(farkas), stats={"method": "guided", "support": len(support)})
        return None

    candidates, infeasible = _primal_candidates(a, b, scale)
    if infeasible and not candidates:
        return try_dual() or try_primal(candidates)
    return try_primal(candidates) or try_dual()
