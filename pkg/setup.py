"""Build script for the optional compiled kernels.

The package works without them; ``snextremes._backend`` falls back to the
NumPy implementations when the extension is missing.
"""
import os
import platform
import sys

from setuptools import Extension, setup

# glibc's vector math library backs the SIMD Owen T kernel on x86-64 Linux
VECTOR_MATH_LIBS = ["mvec", "m"] if sys.platform == "linux" and platform.machine() == "x86_64" else []

ext_modules = []
if os.environ.get("SNEXTREMES_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        print("Cython/numpy unavailable; building pure-Python package", file=sys.stderr)
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "snextremes._kernels",
                    ["src/snextremes/_kernels.pyx", "src/snextremes/_quadrature.c"],
                    include_dirs=[np.get_include(), "src/snextremes"],
                    library_dirs=[os.path.join(os.path.dirname(np.__file__), "random", "lib")],
                    libraries=["npyrandom"] + VECTOR_MATH_LIBS,
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3", "-fopenmp-simd"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
