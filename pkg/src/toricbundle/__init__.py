"""Exact-arithmetic cohomology rings of toric bundles.

Three independent models of the same ring (Stanley-Reisner quotient,
self-dual quotient by mixed-integral intersection numbers, differential
operators modulo the annihilator of the self-intersection polynomial) plus
the polyhedral machinery to cross-validate them.  All arithmetic is exact
rational; every identity check is an equality of fractions.
"""

from toricbundle._kernels import BACKEND as kernel_backend
from toricbundle.bundle import (
    BaseData,
    BundleSpec,
    RingReport,
    cross_validate,
    ell_functional,
    f_gamma,
    horizontal_part,
    ring_via_diff,
    ring_via_sd,
    ring_via_sr,
    self_intersection,
    verify_bkk,
)
from toricbundle.exactlin import QMatrix, kernel_basis, rref, solve
from toricbundle.galg import (
    GradedAlgebra,
    TopFunctional,
    ann_quotient,
    build_quotient,
    check_poincare,
    frobenius_matrix,
    graded_isomorphic,
    sd_quotient,
)
from toricbundle.integrate import (
    integrate_over_polytope,
    integrate_over_simplex,
    i_f_polynomial,
    mixed_integral,
    triangulate,
    volume,
)
from toricbundle.polyhedral import (
    AffineVirtualPolytope,
    Fan,
    Polytope,
    VirtualPolytope,
    dual_vertex,
    is_complete,
    is_convex_on,
    is_projective,
    is_smooth,
    minkowski_sum,
    polytope_from_support,
    support_function,
    validate_fan,
)
from toricbundle.qpoly import QPolynomial

__version__ = "0.1.0"

__all__ = [
    "AffineVirtualPolytope",
    "BaseData",
    "BundleSpec",
    "Fan",
    "GradedAlgebra",
    "Polytope",
    "QMatrix",
    "QPolynomial",
    "RingReport",
    "TopFunctional",
    "VirtualPolytope",
    "ann_quotient",
    "build_quotient",
    "check_poincare",
    "cross_validate",
    "dual_vertex",
    "ell_functional",
    "f_gamma",
    "frobenius_matrix",
    "graded_isomorphic",
    "horizontal_part",
    "i_f_polynomial",
    "integrate_over_polytope",
    "integrate_over_simplex",
    "is_complete",
    "is_convex_on",
    "is_projective",
    "is_smooth",
    "kernel_backend",
    "kernel_basis",
    "minkowski_sum",
    "mixed_integral",
    "polytope_from_support",
    "ring_via_diff",
    "ring_via_sd",
    "ring_via_sr",
    "rref",
    "sd_quotient",
    "self_intersection",
    "solve",
    "support_function",
    "triangulate",
    "validate_fan",
    "verify_bkk",
    "volume",
    "__version__",
]
