"""Pure-Python integer Gauss-Jordan kernel.

Reference implementation of the row-reduction loop; the Cython module
``_gj_cy`` compiles the identical algorithm.  Both must stay in lockstep:
the benchmark and the fallback tests assert bit-identical output.
"""

from math import gcd


def gauss_jordan_int(rows):
    """Row-reduce a dense integer matrix in place.

    ``rows`` is a list of equal-length lists of Python ints.  Pivots are
    chosen as the first nonzero entry per column scanning rows top-down.
    Elimination is fraction-free (cross-multiplication) with per-row gcd
    reduction; afterwards the first ``len(pivots)`` rows are the pivot rows
    in pivot-column order (gcd-reduced, pivot entry positive) and every
    remaining row is zero.  Returns the list of pivot columns.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = -1
        for r in range(rank, nrows):
            if rows[r][col]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        g = 0
        for c in range(ncols):
            g = gcd(g, prow[c])
        if prow[col] < 0:
            g = -g
        if g != 1:
            for c in range(ncols):
                prow[c] //= g
        pval = prow[col]
        for r in range(nrows):
            if r == rank:
                continue
            row = rows[r]
            v = row[col]
            if not v:
                continue
            g = 0
            for c in range(ncols):
                row[c] = pval * row[c] - v * prow[c]
                g = gcd(g, row[c])
            if g > 1:
                for c in range(ncols):
                    row[c] //= g
        pivots.append(col)
        rank += 1
    return pivots
