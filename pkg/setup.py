"""Build the optional compiled Airy kernel.

The extension is optional: if Cython or a C compiler is unavailable the
package falls back to the numpy implementation at import time.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("GRAVBOUNCE_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "gravbounce._airy_ext",
                    ["src/gravbounce/_airy_ext.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
