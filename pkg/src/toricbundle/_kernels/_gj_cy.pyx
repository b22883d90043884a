# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer Gauss-Jordan kernel.

Same algorithm as ``_gj_py.gauss_jordan_int``; the speedup comes from
removing interpreter dispatch around the arbitrary-precision integer
arithmetic of the inner elimination loop.
"""

from math import gcd


def gauss_jordan_int(list rows):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t ncols = len(rows[0]) if nrows else 0
    cdef Py_ssize_t col, r, c, piv, rank
    cdef list prow, row
    cdef object g, pval, v

    pivots = []
    rank = 0
    for col in range(ncols):
        piv = -1
        for r in range(rank, nrows):
            if (<list>rows[r])[col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = <list>rows[rank]
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
            row = <list>rows[r]
            v = row[col]
            if v == 0:
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
