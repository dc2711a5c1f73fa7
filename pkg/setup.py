"""Build script.

The compiled extension is optional: if Cython (or a C compiler) is not
available the package falls back to the pure-Python kernels in
``toprec._kernels_py``.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/toprec/_speedups.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
