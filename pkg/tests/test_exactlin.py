"""Exact linear algebra: spec examples plus algebraic property tests."""

from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from toricbundle.exactlin import (
    QMatrix,
    kernel_basis,
    rank,
    row_space_rref,
    rref,
    solve,
)


def test_rref_rank_one():
    m, pivots = rref(QMatrix([[1, 2], [2, 4]]))
    assert m == QMatrix([[1, 2], [0, 0]])
    assert pivots == (0,)


def test_rref_identity():
    m = QMatrix.identity(3)
    r, pivots = rref(m)
    assert r == m
    assert pivots == (0, 1, 2)


def test_rref_hand_reduction():
    r, pivots = rref(QMatrix([[1, 1], [1, -1]]))
    assert r == QMatrix.identity(2)
    assert pivots == (0, 1)


def test_kernel_single_relation():
    (v,) = kernel_basis(QMatrix([[1, 1]]))
    assert v[0] + v[1] == 0 and any(v)


def test_kernel_identity_empty():
    assert kernel_basis(QMatrix.identity(4)) == []


def test_kernel_vectors_annihilated():
    m = QMatrix([[1, 2, 3]])
    basis = kernel_basis(m)
    assert len(basis) == 2
    for v in basis:
        assert m.matvec(v) == (F(0),)
    assert rank(QMatrix(basis)) == 2


def test_solve_identity():
    assert solve(QMatrix.identity(2), [F(3), F(5)]) == (F(3), F(5))


def test_solve_scalar_division():
    assert solve(QMatrix([[2]]), [3]) == (F(3, 2),)


def test_solve_inconsistent():
    assert solve(QMatrix([[1, 0], [0, 0]]), [0, 1]) is None


rationals = st.builds(F, st.integers(-20, 20), st.integers(1, 7))
matrices = st.integers(1, 4).flatmap(
    lambda cols: st.lists(
        st.lists(rationals, min_size=cols, max_size=cols),
        min_size=1,
        max_size=5,
    )
)


@settings(max_examples=120, deadline=None)
@given(matrices)
def test_rref_idempotent(rows):
    m = QMatrix(rows)
    r1, p1 = rref(m)
    r2, p2 = rref(r1)
    assert r1 == r2 and p1 == p2


@settings(max_examples=120, deadline=None)
@given(matrices)
def test_rank_nullity(rows):
    m = QMatrix(rows)
    assert rank(m) + len(kernel_basis(m)) == m.cols


@settings(max_examples=120, deadline=None)
@given(matrices)
def test_kernel_exact(rows):
    m = QMatrix(rows)
    for v in kernel_basis(m):
        assert all(x == 0 for x in m.matvec(v))


def test_row_space_canonical():
    a = row_space_rref([[F(2), F(4)], [F(1), F(3)]])
    b = row_space_rref([[F(1), F(2)], [F(0), F(1)], [F(3), F(7)]])
    assert a == b
