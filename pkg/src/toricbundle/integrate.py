"""Exact polynomial integration over polytopes and mixed integrals.

The measure is Lebesgue normalized so a fundamental cube of the lattice has
volume 1.  Integration over a simplex is the affine pullback to the standard
simplex with the closed form

    int_{std} x^a dmu  =  (prod a_i!) / (|a| + n)!

and polytopes are integrated by summing a triangulation.  Polarized
("mixed") integrals of virtual polytopes are computed by inclusion-exclusion
from a strictly convex anchor, which makes them well defined on the whole
space of virtual polytopes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from toricbundle.errors import (
    AnchorFailure,
    DegreeMismatch,
    DimensionMismatch,
    LowerDimensional,
)
from toricbundle.exactlin import QMatrix, solve
from toricbundle.polyhedral import (
    Fan,
    Polytope,
    VirtualPolytope,
    affine_dim,
    dual_vertex,
    is_convex_on,
    is_projective,
    polytope_from_support,
)
from toricbundle.qpoly import (
    QPolynomial,
    monomials_of_degree,
    require_homogeneous,
)


@dataclass(frozen=True)
class SimplexChain:
    """Signed list of simplices; here always a genuine triangulation."""

    simplices: tuple[tuple[tuple[Fraction, ...], ...], ...]
    signs: tuple[int, ...]

    def __len__(self):
        return len(self.simplices)


def _det(rows) -> Fraction:
    m = QMatrix(rows)
    n = m.rows
    work = [[Fraction(x) for x in row] for row in m.entries]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        det *= work[col][col]
        inv = 1 / work[col][col]
        for r in range(col + 1, n):
            if work[r][col]:
                f = work[r][col] * inv
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
    return det


def integrate_over_simplex(f: QPolynomial, simplex) -> Fraction:
    """Exact integral of f over an n-simplex given by n+1 vertices."""
    verts = [tuple(Fraction(x) for x in v) for v in simplex]
    n = len(verts) - 1
    if len(f.vars) != n or any(len(v) != n for v in verts):
        raise DimensionMismatch("simplex/polynomial dimension mismatch")
    if n == 0:
        return Fraction(0)
    v0 = verts[0]
    cols = [[verts[j + 1][i] - v0[i] for j in range(n)] for i in range(n)]
    det = abs(_det(cols))
    if det == 0:
        return Fraction(0)
    # pull back: x_i = v0_i + sum_j B_ij u_j
    images = [
        QPolynomial.linear_form(f.vars, cols[i], const=v0[i]) for i in range(n)
    ]
    g = f.substitute(images)
    total = Fraction(0)
    for expo, coeff in g.terms.items():
        num = 1
        for e in expo:
            num *= factorial(e)
        total += coeff * Fraction(num, factorial(sum(expo) + n))
    return det * total


def triangulate(p: Polytope) -> SimplexChain:
    """Fan-of-a-vertex triangulation from the lex-smallest vertex.

    Recurses through the face lattice (facets of each face are read off the
    H-representation); all signs are +1.  Raises for polytopes that are not
    full-dimensional in their ambient space.
    """
    d = p.ambient_dim
    if affine_dim(p.vertices) < d:
        raise LowerDimensional("polytope not full-dimensional")
    p.facet_halfspaces()  # ensure an H-representation exists

    def rec(verts, a):
        if len(verts) == a + 1:
            return [tuple(verts)]
        apex = min(verts)
        out = []
        for facet in p.faces_of_codim_one(verts):
            if apex in facet:
                continue
            for s in rec(facet, a - 1):
                out.append((apex,) + s)
        return out

    simplices = tuple(rec(p.vertices, d))
    return SimplexChain(simplices, (1,) * len(simplices))


def integrate_over_polytope(f: QPolynomial, p: Polytope) -> Fraction:
    """Integral over p in ambient measure; 0 for lower-dimensional p."""
    if p.is_empty() or affine_dim(p.vertices) < p.ambient_dim:
        return Fraction(0)
    return sum(
        (integrate_over_simplex(f, s) for s in triangulate(p).simplices),
        Fraction(0),
    )


def volume(p: Polytope) -> Fraction:
    if p.is_empty():
        return Fraction(0)
    one = QPolynomial.constant([f"x{i}" for i in range(p.ambient_dim)], 1)
    return integrate_over_polytope(one, p)


# ---------------------------------------------------------------------------
# mixed integrals by polarization
# ---------------------------------------------------------------------------


def convex_anchor(fan: Fan, summands) -> VirtualPolytope:
    """A strictly convex base point large enough that adding any subset of
    the given virtual polytopes stays convex on the fan."""
    ok, witness = is_projective(fan)
    if not ok:
        raise AnchorFailure("fan admits no strictly convex support vector")
    subset_sums = [VirtualPolytope(fan, (Fraction(0),) * fan.nrays)]
    for vp in summands:
        subset_sums += [s + vp for s in subset_sums]
    anchor = witness
    for _ in range(80):
        if all(is_convex_on(fan, anchor + s) for s in subset_sums):
            return anchor
        anchor = anchor.scale(2)
    raise AnchorFailure("anchor scaling did not terminate")


def i_f_value(fan: Fan, f: QPolynomial, vp: VirtualPolytope) -> Fraction:
    """I_f at a convex support vector: a direct integral."""
    return integrate_over_polytope(f, polytope_from_support(fan, vp))


def mixed_integral(fan: Fan, f: QPolynomial, args) -> Fraction:
    """Polarization of Delta |-> int_Delta f at the given virtual polytopes.

    Requires len(args) = fan.dim + deg(f); computed as the top forward
    difference (1/m!) sum_S (-1)^{m-|S|} I_f(P0 + sum_S args) from a strictly
    convex anchor P0.  Top-order differences of a degree-m polynomial are
    constant in the base point, so the value does not depend on P0.
    """
    args = list(args)
    m = len(args)
    deg = max(f.degree(), 0)
    if m != fan.dim + deg:
        raise DegreeMismatch(
            f"need {fan.dim + deg} arguments for degree-{deg} integrand, got {m}"
        )
    anchor = convex_anchor(fan, args)
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=m):
        vp = anchor
        for take, arg in zip(bits, args):
            if take:
                vp = vp + arg
        sign = (-1) ** (m - sum(bits))
        total += sign * i_f_value(fan, f, vp)
    return total / factorial(m)


def integral_over_virtual(fan: Fan, f: QPolynomial, vp: VirtualPolytope) -> Fraction:
    """The polynomial extension of I_f evaluated at a virtual polytope.

    Handles inhomogeneous f by polarizing each homogeneous part on the
    diagonal; agrees with the direct integral when vp is convex.
    """
    total = Fraction(0)
    for d in range(f.degree() + 1):
        part = f.homogeneous_part(d)
        if part:
            total += mixed_integral(fan, part, [vp] * (fan.dim + d))
    return total


def i_f_polynomial(fan: Fan, f: QPolynomial) -> QPolynomial:
    """The homogeneous polynomial in h_1..h_s restricting to I_f.

    Found by exact interpolation at strictly convex integer-perturbed
    anchors, then re-verified at fresh convex points.
    """
    m = require_homogeneous(f)
    m = max(m, 0)
    d = fan.dim + m
    s = fan.nrays
    hvars = tuple(f"h{i + 1}" for i in range(s))
    if not f:
        return QPolynomial.zero(hvars)
    monos = monomials_of_degree(s, d)
    ok, witness = is_projective(fan)
    if not ok:
        raise AnchorFailure("fan admits no strictly convex support vector")

    def sample_points():
        for radius in itertools.count(1):
            base = witness.scale(2 * radius * (d + 1))
            for delta in itertools.product(range(d + 1), repeat=s):
                vp = VirtualPolytope(
                    fan, tuple(b + x for b, x in zip(base.h, delta))
                )
                if is_convex_on(fan, vp):
                    yield vp

    def monomial_row(vp):
        row = []
        for expo in monos:
            acc = Fraction(1)
            for x, e in zip(vp.h, expo):
                if e:
                    acc *= x**e
            row.append(acc)
        return row

    rows: list[list[Fraction]] = []
    vals: list[Fraction] = []
    echelon: list[list[Fraction]] = []  # rows kept in echelon form
    points = sample_points()
    need = len(monos)
    stalls = 0
    while len(rows) < need:
        vp = next(points)
        row = monomial_row(vp)
        red = list(row)
        for erow in echelon:
            p = next(t for t, x in enumerate(erow) if x)
            if red[p]:
                c = red[p]
                for t in range(p, need):
                    red[t] -= c * erow[t]
        if any(red):
            p = next(t for t, x in enumerate(red) if x)
            inv = 1 / red[p]
            echelon.append([x * inv for x in red])
            echelon.sort(key=lambda r: next(t for t, x in enumerate(r) if x))
            rows.append(row)
            vals.append(i_f_value(fan, f, vp))
            stalls = 0
        else:
            stalls += 1
            if stalls > 50 * need + 200:
                raise AnchorFailure("interpolation system is rank-deficient")

    sol = solve(QMatrix(rows), vals)
    assert sol is not None
    poly = QPolynomial(hvars, dict(zip(monos, sol)))
    for _ in range(3):  # verify at fresh convex points
        vp = next(points)
        assert poly.evaluate(vp.h) == i_f_value(fan, f, vp), (
            "interpolation self-check failed"
        )
    return poly


# ---------------------------------------------------------------------------
# test oracles from the differentiation lemmas
# ---------------------------------------------------------------------------


def square_free_derivative_check(
    fan: Fan, f: QPolynomial, delta: VirtualPolytope, ray_set
) -> Fraction:
    """d_I of the I_f polynomial at a strictly convex Delta.

    Asserts the closed form: 0 when the rays of I span no cone, and
    f(A) * |det(e_i : i in I)| for cone-spanning sets of full size n, with A
    the vertex of Delta dual to the cone.  (Index sets larger than n never
    span a cone, so they always assert 0.)
    """
    ray_set = tuple(sorted(ray_set))
    poly = i_f_polynomial(fan, f)
    for i in ray_set:
        poly = poly.partial(i)
    value = poly.evaluate(delta.h)
    if not fan.spans_cone(ray_set):
        assert value == 0, f"d_I I_f != 0 on non-cone {ray_set}"
    elif len(ray_set) == fan.dim:
        a = dual_vertex(fan, ray_set, delta.h)
        det = abs(_det([list(fan.rays[i]) for i in ray_set]))
        # det is 1 on smooth cones; the corner region scales with the dual
        # basis, hence the division for merely simplicial ones.
        assert value == f.evaluate(a) / det, "derivative closed form failed"
    return value


def convex_chain_identity_check(
    fan: Fan, f: QPolynomial, delta: VirtualPolytope, ray_set, lams
) -> bool:
    """Inclusion-exclusion over facet shifts against the corner box.

    For a cone-spanning index set I and small lambda_i > 0, the alternating
    sum of integrals over the shifted polytopes equals the integral over the
    parallelepiped spanned by lambda_i e_i at the dual vertex; with any
    lambda_i = 0 both sides vanish.
    """
    ray_set = tuple(sorted(ray_set))
    lams = [Fraction(x) for x in lams]
    n = fan.dim
    if len(ray_set) != n:
        raise DegreeMismatch("need exactly dim-many ray indices")
    lhs = Fraction(0)
    for bits in itertools.product((0, 1), repeat=len(ray_set)):
        h = list(delta.h)
        for take, i, lam in zip(bits, ray_set, lams):
            if take:
                h[i] += lam
        vp = VirtualPolytope(fan, tuple(h))
        sign = (-1) ** (n + sum(bits))
        lhs += sign * i_f_value(fan, f, vp)

    if any(lam == 0 for lam in lams) or not fan.spans_cone(ray_set):
        rhs = Fraction(0)
    else:
        # corner box at the dual vertex: edges lambda_i * w_i where the w_i
        # are dual to the cone generators (<w_i, e_j> = delta_ij), i.e. the
        # region of points beyond exactly the shifted facets
        a = dual_vertex(fan, ray_set, delta.h)
        emat = QMatrix([fan.rays[i] for i in ray_set])
        duals = [solve(emat, [int(i == k) for i in range(n)]) for k in range(n)]
        corners = []
        for bits in itertools.product((0, 1), repeat=n):
            pt = list(a)
            for take, w, lam in zip(bits, duals, lams):
                if take:
                    for c in range(n):
                        pt[c] += lam * w[c]
            corners.append(tuple(pt))
        box = Polytope.from_vertices(corners)
        rhs = integrate_over_polytope(f, box)
    return lhs == rhs
