"""Exact two-phase simplex over the rationals with Bland's anti-cycling rule."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple | None = None


def _pivot(T, cost, basis, row, col):
    piv = T[row][col]
    prow = [a / piv for a in T[row]]
    T[row] = prow
    for i, r in enumerate(T):
        if i != row and r[col]:
            f = r[col]
            T[i] = [a - f * b for a, b in zip(r, prow)]
    if cost[col]:
        f = cost[col]
        cost[:] = [a - f * b for a, b in zip(cost, prow)]
    basis[row] = col


def _run(T, cost, basis, allowed):
    """Iterate to optimality; ``cost`` holds reduced costs (maximization)."""
    while True:
        col = next((j for j in allowed if cost[j] > 0), None)
        if col is None:
            return OPTIMAL
        best = None
        for i, r in enumerate(T):
            if r[col] > 0:
                ratio = r[-1] / r[col]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        _pivot(T, cost, basis, best[1], col)


def maximize(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Maximize ``c.x`` over ``A_ub x <= b_ub, A_eq x = b_eq`` with ``x`` free."""
    n = len(c)
    rows = []
    for a, b in zip(A_ub, b_ub):
        rows.append((list(a), Fraction(b), True))
    for a, b in zip(A_eq, b_eq):
        rows.append((list(a), Fraction(b), False))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2])
    # columns: u (n), v (n), slacks, artificials (m), rhs
    N = 2 * n + n_slack + m
    T = []
    basis = []
    s = 0
    for i, (a, b, is_ub) in enumerate(rows):
        row = [Fraction(0)] * (N + 1)
        for j, aj in enumerate(a):
            row[j] = Fraction(aj)
            row[n + j] = -Fraction(aj)
        if is_ub:
            row[2 * n + s] = Fraction(1)
            s += 1
        row[N] = b
        if b < 0:
            row = [-x for x in row]
        row[2 * n + n_slack + i] = Fraction(1)
        T.append(row)
        basis.append(2 * n + n_slack + i)
    art = set(range(2 * n + n_slack, N))

    # phase 1: maximize -(sum of artificials)
    cost = [Fraction(0)] * (N + 1)
    for r in T:
        cost = [a + b for a, b in zip(cost, r)]
    for j in art:
        cost[j] = Fraction(0)
    _run(T, cost, basis, range(N))
    if any(T[i][N] != 0 for i in range(len(T)) if basis[i] in art):
        return LPResult(INFEASIBLE)
    i = 0
    while i < len(T):
        if basis[i] in art:
            col = next((j for j in range(2 * n + n_slack) if T[i][j] != 0), None)
            if col is None:
                del T[i], basis[i]
                continue
            _pivot(T, cost, basis, i, col)
        i += 1

    # phase 2
    full_c = [Fraction(x) for x in c] + [-Fraction(x) for x in c] + [Fraction(0)] * (n_slack + m + 1)
    cost = list(full_c)
    for r, bvar in zip(T, basis):
        if cost[bvar]:
            f = cost[bvar]
            cost = [a - f * b for a, b in zip(cost, r)]
    status = _run(T, cost, basis, range(2 * n + n_slack))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    z = [Fraction(0)] * N
    for r, bvar in zip(T, basis):
        z[bvar] = r[N]
    x = tuple(z[j] - z[n + j] for j in range(n))
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x)


def minimize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    res = maximize([-Fraction(x) for x in c], A_ub, b_ub, A_eq, b_eq)
    if res.status != OPTIMAL:
        return res
    return LPResult(OPTIMAL, -res.value, res.x)


def is_feasible(n, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> bool:
    return maximize([0] * n, A_ub, b_ub, A_eq, b_eq).status != INFEASIBLE
