"""Exact two-phase simplex with Bland's rule.

Works over any closed scalar tier (rationals or a single quadratic field);
all pivoting is exact, entering/leaving choices follow Bland's rule, so the
output is deterministic and the method terminates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalar import Scalar, to_scalar


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple | None = None
    objective: Scalar | None = None


class _Tableau:
    def __init__(self, a, b, nvars):
        self.a = a  # list of rows, each a list of Scalars (nvars + artificials)
        self.b = b
        self.nvars = nvars
        self.basis = []

    def pivot(self, row, col):
        a, b = self.a, self.b
        inv = to_scalar(1) / a[row][col]
        a[row] = [x * inv for x in a[row]]
        b[row] = b[row] * inv
        for r in range(len(a)):
            if r != row and a[r][col].sign() != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
                b[r] = b[r] - f * b[row]
        self.basis[row] = col


def _bland_minimize(t: _Tableau, cost: list) -> tuple[str, list]:
    """Minimize cost @ x over the tableau's feasible region; Bland's rule."""
    m = len(t.a)
    ncols = len(t.a[0])
    # Reduced costs: c - c_B B^-1 A maintained explicitly.
    red = list(cost)
    obj = to_scalar(0)
    for r, bc in enumerate(t.basis):
        if cost[bc].sign() != 0:
            f = cost[bc]
            red = [x - f * y for x, y in zip(red, t.a[r])]
            obj = obj - f * t.b[r]
    while True:
        enter = next((j for j in range(ncols) if red[j].sign() < 0), None)
        if enter is None:
            return "optimal", red
        leave = None
        best = None
        for r in range(m):
            arj = t.a[r][enter]
            if arj.sign() > 0:
                ratio = t.b[r] / arj
                if best is None or ratio < best or (ratio == best and t.basis[r] < t.basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            return "unbounded", red
        f = red[enter]
        t.pivot(leave, enter)
        red = [x - f * y for x, y in zip(red, t.a[leave])]


def solve_standard_lp(c, a_eq, b_eq) -> LPResult:
    """min c @ x  s.t.  a_eq @ x = b_eq,  x >= 0; exact two-phase simplex."""
    c = [to_scalar(v) for v in c]
    n = len(c)
    rows = [[to_scalar(v) for v in row] for row in a_eq]
    rhs = [to_scalar(v) for v in b_eq]
    m = len(rows)
    for r in range(m):
        if rhs[r].sign() < 0:
            rows[r] = [-x for x in rows[r]]
            rhs[r] = -rhs[r]
    # Phase 1: artificial variables n..n+m-1.
    zero, one = to_scalar(0), to_scalar(1)
    a = [rows[r] + [one if i == r else zero for i in range(m)] for r in range(m)]
    t = _Tableau(a, rhs, n)
    t.basis = [n + r for r in range(m)]
    phase1_cost = [zero] * n + [one] * m
    status, _ = _bland_minimize(t, phase1_cost)
    assert status == "optimal"  # phase 1 is bounded below by 0
    art_value = to_scalar(0)
    for r, bc in enumerate(t.basis):
        if bc >= n:
            art_value = art_value + t.b[r]
    if art_value.sign() != 0:
        return LPResult("infeasible")
    # Drive remaining artificials out of the basis (degenerate rows).
    drop = []
    for r in range(m):
        if t.basis[r] >= n:
            col = next((j for j in range(n) if t.a[r][j].sign() != 0), None)
            if col is None:
                drop.append(r)
            else:
                t.pivot(r, col)
    if drop:
        t.a = [row for r, row in enumerate(t.a) if r not in drop]
        t.b = [v for r, v in enumerate(t.b) if r not in drop]
        t.basis = [bc for r, bc in enumerate(t.basis) if r not in drop]
    # Phase 2 on original variables only (artificial columns frozen out).
    t.a = [row[:n] for row in t.a]
    status, _ = _bland_minimize(t, c)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [to_scalar(0)] * n
    for r, bc in enumerate(t.basis):
        x[bc] = t.b[r]
    obj = to_scalar(0)
    for j in range(n):
        obj = obj + c[j] * x[j]
    return LPResult("optimal", tuple(x), obj)


def maximize_over_polyhedron(objective, a_ub, b_ub) -> LPResult:
    """max objective @ x  s.t.  a_ub @ x <= b_ub, x free.

    Free variables are split (x = u - w), slacks close the inequalities.
    """
    objective = [to_scalar(v) for v in objective]
    d = len(objective)
    m = len(a_ub)
    zero = to_scalar(0)
    rows = []
    for i, row in enumerate(a_ub):
        row = [to_scalar(v) for v in row]
        slack = [to_scalar(1) if k == i else zero for k in range(m)]
        rows.append(row + [-v for v in row] + slack)
    cost = [-v for v in objective] + list(objective) + [zero] * m
    res = solve_standard_lp(cost, rows, b_ub)
    if res.status != "optimal":
        return res
    x = tuple(res.x[j] - res.x[d + j] for j in range(d))
    return LPResult("optimal", x, -res.objective)
