"""Build hook for the optional compiled coder kernel.

The package is fully functional as pure Python; when Cython and a C
compiler are available the range-coder kernel is compiled and picked up
automatically at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("semcomm._coder_cy", ["src/semcomm/_coder_cy.pyx"])],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
