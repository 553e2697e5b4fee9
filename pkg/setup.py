"""Build script: compiles the rule-matching kernel when Cython is available.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "dipt._kernels._match",
                ["src/dipt/_kernels/_match.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
