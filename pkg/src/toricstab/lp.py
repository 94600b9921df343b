"""Exact linear programming over ``Fraction``.

Problems have few variables (at most five) but possibly thousands of
constraints, so the primal ``min c.x s.t. A x >= b`` is solved through its
dual, which is in standard form with one row per primal variable.  The dual
is handled by a revised two-phase simplex using Bland's rule.
"""
from dataclasses import dataclass
from fractions import Fraction

from .linalg import as_fraction, dot

__all__ = [
    "LPProblem",
    "LPSolution",
    "PropernessError",
    "solve_lp",
    "lexmin",
    "minimize_pl_convex",
    "max_affine",
]

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PropernessError(ArithmeticError):
    """The piecewise-linear objective is unbounded below."""


@dataclass(frozen=True)
class LPSolution:
    status: str
    optimum: Fraction = None
    argmin: tuple = None


@dataclass(frozen=True)
class LPProblem:
    """``min objective . x + offset`` subject to ``a . x >= rhs`` for each
    ``(a, rhs)`` in ``constraints``; variables are free."""

    objective: tuple
    constraints: tuple
    offset: Fraction = _ZERO

    def solve(self):
        return solve_lp(self.objective, self.constraints, self.offset)


def _standard_simplex(cost, cols, b):
    """``min cost . p`` s.t. ``sum_j p_j cols[j] = b``, ``p >= 0``.

    Returns ``(status, p, duals)`` where ``p`` maps column index to value and
    ``duals`` is the simplex multiplier vector of the optimal basis.
    """
    k = len(b)
    n = len(cols)
    flip = [bi < 0 for bi in b]
    b = [-bi if f else bi for bi, f in zip(b, flip)]
    cols = [[-a if f else a for a, f in zip(col, flip)] for col in cols]

    basis = [n + i for i in range(k)]
    binv = [[_ONE if i == j else _ZERO for j in range(k)] for i in range(k)]
    xb = list(b)

    def column(j):
        if j >= n:
            return [_ONE if i == j - n else _ZERO for i in range(k)]
        return cols[j]

    def run(costs, allow):
        while True:
            cb = [costs(basis[i]) for i in range(k)]
            y = [sum((cb[i] * binv[i][r] for i in range(k)), _ZERO) for r in range(k)]
            inbasis = set(basis)
            enter = None
            for j in range(n + k):
                if j in inbasis or not allow(j):
                    continue
                col = column(j)
                red = costs(j) - sum((y[r] * col[r] for r in range(k) if col[r]), _ZERO)
                if red < 0:
                    enter = j
                    break
            if enter is None:
                return OPTIMAL, y
            col = column(enter)
            d = [sum((binv[i][r] * col[r] for r in range(k) if col[r]), _ZERO) for i in range(k)]
            leave = None
            best = None
            for i in range(k):
                if d[i] > 0:
                    ratio = xb[i] / d[i]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best = ratio
                        leave = i
            if leave is None:
                return UNBOUNDED, y
            piv = d[leave]
            binv[leave] = [x / piv for x in binv[leave]]
            xb[leave] = xb[leave] / piv
            for i in range(k):
                if i != leave and d[i] != 0:
                    f = d[i]
                    binv[i] = [x - f * z for x, z in zip(binv[i], binv[leave])]
                    xb[i] = xb[i] - f * xb[leave]
            basis[leave] = enter

    status, _ = run(lambda j: _ONE if j >= n else _ZERO, lambda j: True)
    if sum((xb[i] for i in range(k) if basis[i] >= n), _ZERO) > 0:
        return INFEASIBLE, None, None

    # drive zero-level artificials out of the basis where possible
    for i in range(k):
        if basis[i] < n:
            continue
        inbasis = set(basis)
        for j in range(n):
            if j in inbasis:
                continue
            col = cols[j]
            di = sum((binv[i][r] * col[r] for r in range(k) if col[r]), _ZERO)
            if di != 0:
                d = [sum((binv[q][r] * col[r] for r in range(k) if col[r]), _ZERO) for q in range(k)]
                binv[i] = [x / di for x in binv[i]]
                xb[i] = xb[i] / di
                for q in range(k):
                    if q != i and d[q] != 0:
                        f = d[q]
                        binv[q] = [x - f * z for x, z in zip(binv[q], binv[i])]
                        xb[q] = xb[q] - f * xb[i]
                basis[i] = j
                break

    status, y = run(lambda j: _ZERO if j >= n else cost[j], lambda j: j < n)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    p = {basis[i]: xb[i] for i in range(k) if basis[i] < n and xb[i] != 0}
    # undo the row flips on the multipliers
    y = [-yi if f else yi for yi, f in zip(y, flip)]
    return OPTIMAL, p, y


def solve_lp(objective, constraints, offset=0):
    """Minimize ``objective . x + offset`` subject to ``a . x >= r``."""
    c = [as_fraction(x) for x in objective]
    offset = as_fraction(offset)
    rows = [([as_fraction(x) for x in a], as_fraction(r)) for a, r in constraints]
    k = len(c)
    if not rows:
        if any(c):
            return LPSolution(UNBOUNDED)
        return LPSolution(OPTIMAL, offset, tuple(_ZERO for _ in c))
    # dual: max r . y  s.t.  sum_i y_i a_i = c, y >= 0
    status, p, y = _standard_simplex([-r for _, r in rows], [a for a, _ in rows], c)
    if status == OPTIMAL:
        x = tuple(-yi for yi in y)
        value = dot(c, x) + offset
        return LPSolution(OPTIMAL, value, x)
    if status == UNBOUNDED:
        return LPSolution(INFEASIBLE)
    # dual infeasible: primal is unbounded or infeasible
    fstatus, _, _ = _standard_simplex([-r for _, r in rows], [a for a, _ in rows], [_ZERO] * k)
    if fstatus == UNBOUNDED:
        return LPSolution(INFEASIBLE)
    return LPSolution(UNBOUNDED)


def lexmin(objective, constraints, offset=0):
    """Optimal value plus the lexicographically smallest optimal point.

    Requires a bounded optimal face; returns the plain solution if some
    coordinate is unbounded below on it.
    """
    sol = solve_lp(objective, constraints, offset)
    if sol.status != OPTIMAL:
        return sol
    k = len(objective)
    c = [as_fraction(x) for x in objective]
    rows = list(constraints) + [([-x for x in c], as_fraction(offset) - sol.optimum)]
    point = list(sol.argmin)
    for i in range(k):
        e = [_ONE if j == i else _ZERO for j in range(k)]
        s = solve_lp(e, rows)
        if s.status != OPTIMAL:
            return sol
        point = list(s.argmin)
        rows.append((e, s.optimum))
        rows.append(([-x for x in e], -s.optimum))
    return LPSolution(OPTIMAL, sol.optimum, tuple(point))


def max_affine(forms, x):
    """``max_j (g_j . x + c_j)`` for forms ``(g_j, c_j)``."""
    return max(dot(g, x) + c for g, c in forms)


def minimize_pl_convex(forms, *, lexicographic=False):
    """Exact global minimum of ``x -> max_j (g_j . x + c_j)``.

    Uses the epigraph LP ``min t`` s.t. ``t >= g_j . x + c_j``.  Returns
    ``(minimum, argmin)``; raises :class:`PropernessError` when unbounded.
    """
    forms = [([as_fraction(v) for v in g], as_fraction(c)) for g, c in forms]
    if not forms:
        raise ValueError("need at least one affine form")
    k = len(forms[0][0])
    # variables (x_1..x_k, t):  t - g.x >= c
    cons = [([-v for v in g] + [_ONE], c) for g, c in forms]
    obj = [_ZERO] * k + [_ONE]
    sol = lexmin(obj, cons) if lexicographic else solve_lp(obj, cons)
    if sol.status == UNBOUNDED:
        raise PropernessError("piecewise-linear objective is unbounded below")
    if sol.status != OPTIMAL:
        raise ArithmeticError(f"epigraph LP returned {sol.status}")
    x = sol.argmin[:k]
    value = max_affine(forms, x)
    assert value == sol.optimum, "epigraph LP optimum not attained"
    return value, x
