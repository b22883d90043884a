"""Exception hierarchy shared by all modules."""


class ToricBundleError(Exception):
    """Base class for all package errors."""


# -- fan / polytope geometry ------------------------------------------------

class FanError(ToricBundleError):
    """Invalid fan data."""


class NonPrimitiveRay(FanError):
    pass


class DegenerateCone(FanError):
    pass


class BadFaceIntersection(FanError):
    pass


class NotPure(FanError):
    """A maximal cone is not full-dimensional."""


class NotConvex(ToricBundleError):
    """Support vector is not convex on the fan."""


class FanTooCoarse(ToricBundleError):
    """The fan does not refine the normal fan of the polytope."""


class LowerDimensional(ToricBundleError):
    """Polytope is not full-dimensional in its ambient space."""


# -- polynomials / integration ----------------------------------------------

class DimensionMismatch(ToricBundleError):
    pass


class DegreeMismatch(ToricBundleError):
    pass


class NotHomogeneous(ToricBundleError):
    pass


class AnchorFailure(ToricBundleError):
    """Internal: no scaling of the convexity anchor worked."""


# -- graded algebras ----------------------------------------------------------

class NonHomogeneousRelation(ToricBundleError):
    pass


class ZeroFunctional(ToricBundleError):
    pass


class NotGenerated(ToricBundleError):
    """Algebra not generated in degree 2 and no extension map supplied."""


class NotDegree2Generated(ToricBundleError):
    pass


class OddBase(ToricBundleError):
    """Base of odd real dimension where an even one is required."""


class NotTopDegree(ToricBundleError):
    pass


# -- catalog ------------------------------------------------------------------

class NotDominant(ToricBundleError):
    pass


class ChamberViolation(ToricBundleError):
    """Polytope leaves the open positive Weyl chamber."""
