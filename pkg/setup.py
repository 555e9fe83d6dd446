"""Build hook for the optional compiled term-arithmetic kernel.

The package is fully functional without the extension; polyauto.kernels
falls back to the pure-Python implementation when the import fails.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "polyauto._kernels_c",
        sources=["src/polyauto/_kernels_c.pyx"],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level="3")
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
