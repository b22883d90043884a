"""Row-reduction kernel selection.

Prefers the compiled extension; falls back to the pure-Python twin when the
extension was not built.  ``BACKEND`` records which one is live so reports
and the benchmark can say.
"""

try:
    from toricbundle._kernels._gj_cy import gauss_jordan_int

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    from toricbundle._kernels._gj_py import gauss_jordan_int

    BACKEND = "python"

__all__ = ["gauss_jordan_int", "BACKEND"]
