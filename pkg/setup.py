"""Build hook: compiles the reduction kernel extension when Cython is present.

The package works without the extension; nablacheck.kernel falls back to the
pure-Python implementation at import time.  Set NABLA_CHECK_PURE=1 to skip the
extension build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("NABLA_CHECK_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/nablacheck/_kernel_c.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
