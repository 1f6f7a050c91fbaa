"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (pure NumPy fallback selected at
import); build failures therefore degrade to a warning instead of aborting
the install.
"""

import warnings

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("hyposolve._kernels", ["src/hyposolve/_kernels.pyx"],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )
except ImportError:
    warnings.warn("Cython unavailable; installing with the pure-Python kernels")
    ext_modules = []

setup(ext_modules=ext_modules)
