"""Graded algebras: quotient engine, Frobenius forms, self-dual quotients,
operator models, isomorphism checking."""

import random
from fractions import Fraction as F
from math import factorial

import pytest

from toricbundle.errors import NonHomogeneousRelation, ZeroFunctional
from toricbundle.galg import (
    GradedAlgebra,
    PresentedAlgebra,
    TopFunctional,
    _unit,
    ann_quotient,
    ann_top_functional,
    build_quotient,
    check_poincare,
    frobenius_matrix,
    graded_isomorphic,
    sd_quotient,
)
from toricbundle.qpoly import QPolynomial

PT = GradedAlgebra(0, {0: ("1",)}, {})


def trunc_poly_algebra(ngens: int, top: int):
    names = tuple(f"x{i + 1}" for i in range(ngens))
    return build_quotient(PresentedAlgebra(PT, names, (), top))


def test_build_quotient_p1():
    rel_sr = {(1, 1): (0, (F(1),))}
    rel_lin = {(1, 0): (0, (F(1),)), (0, 1): (0, (F(-1),))}
    m = build_quotient(PresentedAlgebra(PT, ("x1", "x2"), (rel_sr, rel_lin), 4))
    assert m.algebra.dims() == (1, 1)
    assert m.monomial_class((0, 0, (2, 0)))[1] == ()  # x1^2 = 0


def test_build_quotient_p2():
    r1 = {(1, 1, 1): (0, (F(1),))}
    r2 = {(1, 0, 0): (0, (F(1),)), (0, 0, 1): (0, (F(-1),))}
    r3 = {(0, 1, 0): (0, (F(1),)), (0, 0, 1): (0, (F(-1),))}
    m = build_quotient(PresentedAlgebra(PT, ("x1", "x2", "x3"), (r1, r2, r3), 6))
    assert m.algebra.dims() == (1, 1, 1)
    # x1*x1 equals the top class x1*x3
    assert m.monomial_class((0, 0, (2, 0, 0)))[1] == m.monomial_class(
        (0, 0, (1, 0, 1))
    )[1]


def test_build_quotient_truncated_free():
    m = trunc_poly_algebra(1, 4)
    assert m.algebra.dims() == (1, 1, 1)


def test_build_quotient_rejects_mixed_degree():
    bad = {(1, 0): (0, (F(1),)), (0, 0): (0, (F(1),))}
    with pytest.raises(NonHomogeneousRelation):
        PresentedAlgebra(PT, ("x1", "x2"), (bad,), 4)


def test_algebra_is_associative():
    m = trunc_poly_algebra(2, 6)
    assert m.algebra.check_associative()


def test_frobenius_examples():
    b = trunc_poly_algebra(1, 4).algebra  # Q[x]/(x^3) in degrees 0,2,4
    ell = TopFunctional(b, 4, (F(1),))
    assert frobenius_matrix(b, ell, 2).entries == ((F(1),),)
    assert frobenius_matrix(b, ell, 0).entries == ((F(1),),)
    assert check_poincare(b, ell)


def test_frobenius_p1xp1_rank():
    rels = (
        {(1, 0, 1, 0): (0, (F(1),))},
        {(0, 1, 0, 1): (0, (F(1),))},
        {(1, 0, 0, 0): (0, (F(1),)), (0, 0, 1, 0): (0, (F(-1),))},
        {(0, 1, 0, 0): (0, (F(1),)), (0, 0, 0, 1): (0, (F(-1),))},
    )
    m = build_quotient(
        PresentedAlgebra(PT, ("x1", "x2", "x3", "x4"), rels, 6)
    )
    assert m.algebra.dims() == (1, 2, 1)
    ell = TopFunctional(m.algebra, 4, (F(1),))
    fm = frobenius_matrix(m.algebra, ell, 2)
    from toricbundle.exactlin import rank

    assert rank(fm) == 2


def test_zero_functional_rejected():
    b = trunc_poly_algebra(1, 4).algebra
    with pytest.raises(ZeroFunctional):
        TopFunctional(b, 4, (F(0),))


def test_poincare_fails_with_dead_generator():
    # Q[x]/(x^2) with an extra degree-2 generator killing everything
    labels = {0: ("1",), 2: ("x", "y"), 4: ("x^2",)}
    products = {
        (2, 0, 2, 0): (F(1),),
        (2, 0, 2, 1): (F(0),),
        (2, 1, 2, 1): (F(0),),
        (2, 0, 4, 0): (),
        (2, 1, 4, 0): (),
        (4, 0, 4, 0): (),
    }
    b = GradedAlgebra(4, labels, products)
    ell = TopFunctional(b, 4, (F(1),))
    assert not check_poincare(b, ell)
    # the self-dual quotient removes y and restores duality
    sq = sd_quotient(b, ell)
    assert sq.algebra.dims() == (1, 1, 1)
    assert check_poincare(sq.algebra, sq.functional)


def test_sd_quotient_monomial_case():
    m = trunc_poly_algebra(1, 8)
    ell = TopFunctional(m.algebra, 6, (F(1),))  # ell(x^3) = 1
    sq = sd_quotient(m.algebra, ell)
    assert sq.algebra.dims() == (1, 1, 1, 1)


def test_sd_quotient_scaling_invariance():
    m = trunc_poly_algebra(2, 6)
    ell = TopFunctional(m.algebra, 4, (F(1), F(2), F(-1)))
    a1 = sd_quotient(m.algebra, ell)
    a5 = sd_quotient(m.algebra, ell.scale(5))
    assert a1.algebra.dims() == a5.algebra.dims()
    assert a1.algebra.products == a5.algebra.products
    assert a5.functional.values == tuple(5 * v for v in a1.functional.values)


def test_sd_quotient_idempotent():
    m = trunc_poly_algebra(2, 6)
    ell = TopFunctional(m.algebra, 4, (F(1), F(0), F(1)))
    first = sd_quotient(m.algebra, ell)
    again = sd_quotient(first.algebra, first.functional)
    assert again.algebra.dims() == first.algebra.dims()
    assert again.algebra.products == first.algebra.products


def _random_presented(rng: random.Random):
    ngens = rng.choice((1, 2, 3))
    top = rng.choice((4, 6))
    names = tuple(f"x{i + 1}" for i in range(ngens))
    rels = []
    if rng.random() < 0.5 and ngens >= 2:
        # one random homogeneous quadratic relation
        from toricbundle.qpoly import monomials_of_degree

        rel = {}
        for expo in monomials_of_degree(ngens, 2):
            c = rng.randint(-2, 2)
            if c:
                rel[expo] = (0, (F(c),))
        if rel:
            rels.append(rel)
    return build_quotient(PresentedAlgebra(PT, names, tuple(rels), top))


def test_sd_quotient_randomized_properties():
    """Criterion-4 style: random B, random ell; Poincare + idempotence."""
    rng = random.Random(2024)
    done = 0
    while done < 5:
        m = _random_presented(rng)
        alg = m.algebra
        deg = rng.choice([d for d in alg.degrees() if d > 0])
        values = tuple(F(rng.randint(-3, 3)) for _ in range(alg.dim(deg)))
        if not any(values):
            continue
        ell = TopFunctional(alg, deg, values)
        sq = sd_quotient(alg, ell)
        assert check_poincare(sq.algebra, sq.functional)
        again = sd_quotient(sq.algebra, sq.functional)
        assert again.algebra.dims() == sq.algebra.dims()
        assert again.algebra.products == sq.algebra.products
        scaled = sd_quotient(alg, ell.scale(F(7, 3)))
        assert scaled.algebra.dims() == sq.algebra.dims()
        assert scaled.algebra.products == sq.algebra.products
        done += 1


def test_left_right_radical_symmetry():
    """Lemma on I1 = I2: pairing matrices are mutual transposes."""
    m = trunc_poly_algebra(2, 6)
    ell = TopFunctional(m.algebra, 6, tuple(F(x) for x in (1, 2, 0, -1)))
    for k in (0, 2, 4, 6):
        a = frobenius_matrix(m.algebra, ell, k)
        b = frobenius_matrix(m.algebra, ell, 6 - k)
        assert a.transpose() == b


def test_ann_quotient_examples():
    hv = ("h1", "h2", "h3")
    vol_p2 = QPolynomial.linear_form(hv, [1, 1, 1]) ** 2 * F(1, 2)
    am = ann_quotient(vol_p2, 2)
    assert am.algebra.dims() == (1, 1, 1)
    g = QPolynomial(("h1", "h2"), {(1, 1): F(1)})
    assert ann_quotient(g, 2).algebra.dims() == (1, 2, 1)
    h = QPolynomial(("h",), {(4,): F(1, 24)})
    assert ann_quotient(h, 4).algebra.dims() == (1, 1, 1, 1, 1)


def test_ann_quotient_matches_sd_of_free():
    """The operator model equals the self-dual quotient of the free algebra
    with ell(d) = d(f)/n! (the reduction behind the general theorem)."""
    hv = ("h1", "h2")
    f = QPolynomial(hv, {(1, 1): F(1), (2, 0): F(1, 2)})
    order = 2
    am = ann_quotient(f, order)

    free = trunc_poly_algebra(2, 2 * order)
    from toricbundle.qpoly import apply_operator

    values = []
    for mono in free.basis_monos[2 * order]:
        _, _, beta = mono
        op = QPolynomial(hv, {beta: F(1)})
        values.append(
            apply_operator(op, f).coefficient((0, 0)) / factorial(order)
        )
    ell = TopFunctional(free.algebra, 2 * order, tuple(values))
    sq = sd_quotient(free.algebra, ell)
    assert sq.algebra.dims() == am.algebra.dims()

    # canonical generator map: class of x_i in sq  ->  class of d_i in ann
    gen_rows = []
    for j in sq.kept[2]:
        mono = free.basis_monos[2][j]
        beta = mono[2]
        op = QPolynomial(hv, {beta: F(1)})
        gen_rows.append(list(am.operator_class(op)[1]))
    assert graded_isomorphic(sq.algebra, am.algebra, gen_rows)


def test_ann_top_functional():
    hv = ("h1", "h2", "h3")
    vol_p2 = QPolynomial.linear_form(hv, [1, 1, 1]) ** 2 * F(1, 2)
    am = ann_quotient(vol_p2, 2)
    assert ann_top_functional(am).values == (F(1, 2),)


def test_ann_quotient_rejects_inhomogeneous():
    from toricbundle.errors import NotHomogeneous

    f = QPolynomial(("h",), {(2,): F(1), (1,): F(1)})
    with pytest.raises(NotHomogeneous):
        ann_quotient(f, 2)


def test_graded_isomorphic_not_generated():
    """A degree gap needs an explicit extension map."""
    from toricbundle.errors import NotGenerated

    labels = {0: ("1",), 4: ("t",), 8: ("t^2",)}
    products = {(4, 0, 4, 0): (F(1),), (4, 0, 8, 0): ()}
    a = GradedAlgebra(8, labels, products)
    with pytest.raises(NotGenerated):
        graded_isomorphic(a, a, [])
    ident = {4: [(F(1),)], 8: [(F(1),)]}
    assert graded_isomorphic(a, a, [], extension=ident)


def test_graded_isomorphic_negative():
    a = trunc_poly_algebra(1, 4).algebra
    b = trunc_poly_algebra(1, 6).algebra
    assert not graded_isomorphic(a, b, [(F(1),)])
    # wrong scaling on the generator is not an isomorphism of Q[x]/(x^3)?
    # x -> 2x IS an isomorphism; x -> 0 is not
    assert graded_isomorphic(a, a, [(F(2),)])
    assert not graded_isomorphic(a, a, [(F(0),)])
