"""Build script: compiles the optional row-reduction kernel.

The package is pure Python except for one hot loop (integer Gauss-Jordan
elimination, the substrate of every exact-linear-algebra call).  If the
extension fails to build the package still works through the pure-Python
fallback in ``toricbundle._kernels._gj_py``.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/toricbundle/_kernels/_gj_cy.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
