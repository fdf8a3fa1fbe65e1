import os

from setuptools import setup

ext_modules = []
if os.environ.get("EM_LAB_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("em_lab._kernels", ["src/em_lab/_kernels.pyx"])],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        # no Cython: the package still works on the pure-Python kernels
        ext_modules = []

setup(ext_modules=ext_modules)
