"""Build the optional compiled kernels.

The package is fully functional without the extension (a pure-Python
twin is selected at import time); building it just makes the hot
constant-product loops faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "xdmev._kernels._cp_ext",
                sources=["src/xdmev/_kernels/_cp_ext.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
