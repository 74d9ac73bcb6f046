"""Build script: compiles the optional term-kernel extension when Cython is
available, and falls back to the pure-Python kernel otherwise."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("CHAINFORM_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/chainform/_termcore.pyx"],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
