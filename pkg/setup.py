"""Build the optional compiled kernels; without Cython the package is pure Python."""

import os

from setuptools import Extension, setup

extensions = []
if not os.environ.get("BANDKNOT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = cythonize(
            [Extension("bandknot._kernels", ["src/bandknot/_kernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=extensions)
