import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; ptising falls back to numpy kernels
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("PTISING_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "ptising._ckernels",
                ["src/ptising/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-fcx-fortran-rules", "-fno-math-errno", "-fno-trapping-math"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
