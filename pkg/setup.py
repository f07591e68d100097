"""Build script for the optional compiled LP kernel.

Without Cython or GMP headers the package installs pure Python and the
fallback kernel is used.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("reluregions._lpcore", ["src/reluregions/_lpcore.pyx"], libraries=["gmp"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
