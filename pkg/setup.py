"""Builds the optional compiled kernels; the package works without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("POSCERT_NO_EXTENSION", "") not in ("1", "true", "yes"):
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "poscert._kernels",
                    ["src/poscert/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
