import os

from setuptools import setup

# The compiled kernels are optional: the package falls back to the pure-Python
# implementation in p1chow._pykernels when the extension is absent.
# Set P1CHOW_NO_EXT=1 to skip building the extension entirely.
ext_modules = []
if not os.environ.get("P1CHOW_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/p1chow/_ckernels.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
