"""Build hook for the optional Cython kernels.

The package works without them; a failed or skipped build leaves the numpy
fallback in place.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("PROJCURV_NO_EXT", "") in ("", "0"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "projcurv._ckernels",
                    ["src/projcurv/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
