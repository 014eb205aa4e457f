# Builds the optional compiled core; the package falls back to the numpy
# backend when the extension is unavailable.
import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension(
            "mngap._core._core_cy",
            sources=["src/mngap/_core/_core_cy.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=["-O3"],
        )],
        language_level="3",
    )

setup(ext_modules=ext_modules)
