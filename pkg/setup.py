"""Build script.  The compiled kernel extension is optional: when Cython or a
C toolchain is unavailable the package installs pure-Python and selects the
numpy fallback at import time."""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        Extension(
            "kinterp._kernels._core",
            ["src/kinterp/_kernels/_core.pyx"],
            include_dirs=[numpy.get_include()],
        ),
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
