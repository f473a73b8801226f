"""Build script: compiles the Cython kernel core when Cython is available.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so compilation failures are non-fatal.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "axivort._kernels_cy",
                ["src/axivort/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"axivort: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
