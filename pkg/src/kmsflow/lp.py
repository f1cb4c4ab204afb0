"""Small dense exact-rational LP solver.

Two-phase tableau simplex with Bland's rule over Fraction arithmetic; sized
for the certificate searches in this package (tens of variables, a few
hundred constraints).  Free variables are handled by sign-splitting.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .affine import rat

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _pivot(tab: List[List[Fraction]], basis: List[int], row: int, col: int):
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    for r, line in enumerate(tab):
        if r != row and line[col] != 0:
            f = line[col]
            tab[r] = [v - f * w for v, w in zip(line, tab[row])]
    basis[row] = col


def _run_simplex(tab, basis, cost, ncols) -> str:
    """Minimise cost (a row of reduced costs appended as tab[-1])."""
    while True:
        obj = tab[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        best, row = None, None
        for r in range(len(tab) - 1):
            if tab[r][col] > 0:
                ratio = tab[r][-1] / tab[r][col]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[row]):
                    best, row = ratio, r
        if row is None:
            return UNBOUNDED
        _pivot(tab, basis, row, col)


def solve_lp(objective: Sequence, a_ub: Sequence, b_ub: Sequence) -> Tuple[str, list]:
    """Maximise objective . x subject to a_ub x <= b_ub with x free.

    Returns (status, x); x is a list of Fractions when status == 'optimal'.
    """
    n = len(objective)
    rows = [[rat(v) for v in row] for row in a_ub]
    b = [rat(v) for v in b_ub]
    if any(len(r) != n for r in rows):
        raise ValueError("constraint row length mismatch")

    # split x = u - v, add slacks
    nv = 2 * n
    m = len(rows)
    full = []
    for row in rows:
        full.append([x for x in row] + [-x for x in row] + [Fraction(0)] * m)
    for i in range(m):
        full[i][nv + i] = Fraction(1)
    # normalise negative rhs so slack columns can serve as a partial basis
    art_rows = []
    for i in range(m):
        if b[i] < 0:
            full[i] = [-v for v in full[i]]
            b[i] = -b[i]
            art_rows.append(i)
    ncols = nv + m
    need_art = len(art_rows)
    total = ncols + need_art
    tab = []
    for i in range(m):
        row = full[i] + [Fraction(0)] * need_art + [b[i]]
        tab.append(row)
    basis = [0] * m
    for k, i in enumerate(art_rows):
        tab[i][ncols + k] = Fraction(1)
        basis[i] = ncols + k
    for i in range(m):
        if i not in art_rows:
            basis[i] = nv + i

    if need_art:
        # phase 1: minimise the sum of artificials
        cost = [Fraction(0)] * (total + 1)
        for k in range(need_art):
            cost[ncols + k] = Fraction(1)
        tab.append(cost)
        for i in range(m):
            if basis[i] >= ncols:
                tab[-1] = [v - w for v, w in zip(tab[-1], tab[i])]
        status = _run_simplex(tab, basis, None, total)
        if status != OPTIMAL or tab[-1][-1] < 0:
            return INFEASIBLE, []
        if -tab[-1][-1] != 0:
            return INFEASIBLE, []
        tab.pop()
        # drive remaining artificials out of the basis where possible
        for r in range(m):
            if basis[r] >= ncols:
                col = next((j for j in range(ncols) if tab[r][j] != 0), None)
                if col is not None:
                    _pivot(tab, basis, r, col)
        # drop artificial columns
        for r in range(len(tab)):
            tab[r] = tab[r][:ncols] + [tab[r][-1]]
        total = ncols

    # phase 2: minimise -objective
    cost = [Fraction(0)] * (total + 1)
    for j in range(n):
        cost[j] = -rat(objective[j])
        cost[n + j] = rat(objective[j])
    tab.append(cost)
    for i in range(m):
        if basis[i] < total and tab[-1][basis[i]] != 0:
            f = tab[-1][basis[i]]
            tab[-1] = [v - f * w for v, w in zip(tab[-1], tab[i])]
    status = _run_simplex(tab, basis, None, total)
    if status != OPTIMAL:
        return status, []
    xs = [Fraction(0)] * (2 * n)
    for r in range(m):
        if basis[r] < 2 * n:
            xs[basis[r]] = tab[r][-1]
    return OPTIMAL, [xs[j] - xs[n + j] for j in range(n)]
