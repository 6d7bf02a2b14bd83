"""Build script: compiles the optional Cython kernel extension.

If Cython (or a C compiler) is unavailable the build silently falls back to
the pure-Python kernels; the package works either way.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [Extension("pulsecal._kernels", ["src/pulsecal/_kernels.pyx"],
                   optional=True)],
        language_level=3,
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
