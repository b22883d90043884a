"""Exact rational linear programming (feasibility only).

A single phase-1 simplex with Bland's rule over ``Fraction`` backs every
feasibility question in the package: strictly convex support vectors,
pairwise face checks of fans, and irredundancy of vertex sets.  Bland's rule
guarantees termination; all pivoting is exact.
"""

from __future__ import annotations

from fractions import Fraction


def feasible_nonneg(a_rows, b) -> list[Fraction] | None:
    """Find x >= 0 with ``A x = b``, or None.

    ``a_rows`` is a list of rational rows, ``b`` the right-hand side.
    Phase-1 simplex: minimise the sum of one artificial variable per row.
    """
    m = len(a_rows)
    if m == 0:
        return []
    n = len(a_rows[0])
    # tableau rows: [a_1 .. a_n | art_1 .. art_m | rhs], basis starts on artificials
    tab = []
    for i, row in enumerate(a_rows):
        row = [Fraction(x) for x in row]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append(row + art + [rhs])
    basis = list(range(n, n + m))
    ncols = n + m
    # objective row: minimise sum of artificials => cost 1 on artificials.
    # reduced costs z_j - c_j with current basis all-artificial:
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(ncols + 1):
        obj[j] = sum(tab[i][j] for i in range(m))
    for j in range(n, ncols):
        obj[j] -= 1

    while True:
        enter = -1
        for j in range(ncols):  # Bland: smallest index with positive reduced cost
            if obj[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][ncols] / tab[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            # unbounded phase-1 objective cannot happen (bounded above by 0
            # decrease ... ) but guard anyway
            return None
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if obj[enter]:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, tab[leave])]
        basis[leave] = enter

    if obj[ncols] != 0:
        return None
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = tab[i][ncols]
    return x


def solve_inequalities(ge_rows, ge_rhs, eq_rows=()) -> list[Fraction] | None:
    """Find a free vector y with ``G y >= g`` and ``E y = 0``, or None.

    Free variables are split as y = u - v with u, v >= 0; each inequality
    gets a slack.  Used with g in {0, 1}: a homogeneous strict system
    ``G y > 0`` is equivalent to ``G y >= 1`` by scaling.
    """
    rows = list(ge_rows)
    nvars = len(rows[0]) if rows else (len(eq_rows[0]) if eq_rows else 0)
    a_rows = []
    b = []
    nslack = len(rows)
    for k, row in enumerate(rows):
        slack = [Fraction(0)] * nslack
        slack[k] = Fraction(-1)
        a_rows.append([Fraction(x) for x in row] + [-Fraction(x) for x in row] + slack)
        b.append(Fraction(ge_rhs[k]))
    for row in eq_rows:
        a_rows.append(
            [Fraction(x) for x in row]
            + [-Fraction(x) for x in row]
            + [Fraction(0)] * nslack
        )
        b.append(Fraction(0))
    sol = feasible_nonneg(a_rows, b)
    if sol is None:
        return None
    return [sol[j] - sol[nvars + j] for j in range(nvars)]


def in_convex_hull(point, points) -> bool:
    """Exact membership of ``point`` in the convex hull of ``points``."""
    if not points:
        return False
    dim = len(point)
    a_rows = [[Fraction(p[d]) for p in points] for d in range(dim)]
    a_rows.append([Fraction(1)] * len(points))
    b = [Fraction(x) for x in point] + [Fraction(1)]
    return feasible_nonneg(a_rows, b) is not None
