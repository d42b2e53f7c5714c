"""Exact rational linear programming via two-phase primal simplex.

Solves  maximize c.x  subject to  A x <= b  with x free, entirely in
Fraction arithmetic.  Bland's rule is used for both the entering and the
leaving variable, so the method terminates on every input (no cycling).

Problems in this package are tiny (tens of rows, a handful of columns),
so a dense tableau is the right trade-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction]
    point: Optional[tuple[Fraction, ...]]

    @property
    def is_feasible(self) -> bool:
        return self.status != INFEASIBLE


def maximize(
    objective: Sequence[Fraction],
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
) -> LPResult:
    """Maximize objective.x subject to rows[i].x <= rhs[i], x free.

    Returns an LPResult; for UNBOUNDED the point is a feasible point (not
    an improving ray), for INFEASIBLE both value and point are None.
    """
    n = len(objective)
    m = len(rows)
    for r in rows:
        if len(r) != n:
            raise ValueError("constraint row length does not match objective")
    if len(rhs) != m:
        raise ValueError("rhs length does not match number of rows")

    # Free variables are split: x_j = x+_j - x-_j.  Columns are laid out
    # [x+ (n) | x- (n) | slacks (m) | artificials (...)] followed by the rhs.
    nstruct = 2 * n
    art_rows = [i for i in range(m) if rhs[i] < 0]
    nart = len(art_rows)
    ncols = nstruct + m + nart

    tab: list[list[Fraction]] = []
    basis: list[int] = []
    art_index = {}
    for k, i in enumerate(art_rows):
        art_index[i] = nstruct + m + k
    for i in range(m):
        sign = -1 if i in art_index else 1
        row = [_ZERO] * (ncols + 1)
        for j in range(n):
            a = Fraction(rows[i][j]) * sign
            row[j] = a
            row[n + j] = -a
        row[nstruct + i] = Fraction(sign)
        row[ncols] = Fraction(rhs[i]) * sign
        if i in art_index:
            row[art_index[i]] = _ONE
            basis.append(art_index[i])
        else:
            basis.append(nstruct + i)
        tab.append(row)

    if nart:
        # Phase 1: maximize -(sum of artificials).
        obj = [_ZERO] * (ncols + 1)
        for i in art_rows:
            obj[art_index[i]] = _ONE  # stored as z_j - c_j with c = -a
        _canonicalize(tab, basis, obj)
        status = _pivot_until_done(tab, basis, obj, ncols)
        assert status == OPTIMAL  # phase-1 objective is bounded by 0
        if obj[ncols] != 0:
            return LPResult(INFEASIBLE, None, None)
        _drive_out_artificials(tab, basis, nstruct + m, ncols)

    banned = set(range(nstruct + m, ncols))
    obj = [_ZERO] * (ncols + 1)
    for j in range(n):
        c = Fraction(objective[j])
        obj[j] = -c
        obj[n + j] = c
    _canonicalize(tab, basis, obj)
    status = _pivot_until_done(tab, basis, obj, ncols, banned)

    point = _extract_point(tab, basis, n, ncols)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, point)
    return LPResult(OPTIMAL, obj[ncols], point)


def _canonicalize(tab, basis, obj) -> None:
    """Eliminate basic columns from the objective row."""
    for i, bj in enumerate(basis):
        coef = obj[bj]
        if coef != 0:
            row = tab[i]
            for j in range(len(obj)):
                if row[j] != 0:
                    obj[j] -= coef * row[j]


def _pivot_until_done(tab, basis, obj, ncols, banned=frozenset()) -> str:
    """Run primal simplex with Bland's rule.  obj holds z_j - c_j entries."""
    m = len(tab)
    while True:
        enter = -1
        for j in range(ncols):
            if j not in banned and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][ncols] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(tab, basis, obj, leave, enter)


def _pivot(tab, basis, obj, leave, enter) -> None:
    row = tab[leave]
    piv = row[enter]
    inv = _ONE / piv
    for j in range(len(row)):
        row[j] *= inv
    for other in tab:
        if other is row:
            continue
        coef = other[enter]
        if coef != 0:
            for j in range(len(row)):
                if row[j] != 0:
                    other[j] -= coef * row[j]
    coef = obj[enter]
    if coef != 0:
        for j in range(len(row)):
            if row[j] != 0:
                obj[j] -= coef * row[j]
    basis[leave] = enter


def _drive_out_artificials(tab, basis, nreal, ncols) -> None:
    """Pivot basic artificials (at level zero) onto real columns.

    A row whose real coefficients are all zero is a redundant constraint;
    its artificial stays basic at zero, which is harmless because the
    artificial columns are banned from entering in phase 2.
    """
    for i in range(len(tab)):
        if basis[i] >= nreal:
            for j in range(nreal):
                if tab[i][j] != 0:
                    dummy = [Fraction(0)] * (ncols + 1)
                    _pivot(tab, basis, dummy, i, j)
                    break


def _extract_point(tab, basis, n, ncols) -> tuple[Fraction, ...]:
    vals = {}
    for i, bj in enumerate(basis):
        vals[bj] = tab[i][ncols]
    return tuple(
        vals.get(j, _ZERO) - vals.get(n + j, _ZERO) for j in range(n)
    )
