"""Builds the optional compiled LP kernel.

Without Cython or a C compiler the package installs pure Python and the
numpy kernel is used instead.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("DCSIT_GDOF_NO_EXT") != "1":
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
                    "dcsit_gdof.lp._vertex_ext",
                    ["src/dcsit_gdof/lp/_vertex_ext.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
