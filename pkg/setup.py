"""Builds the optional compiled SAT core; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SYMSMT_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "symsmt.sat._ccdcl",
                    ["src/symsmt/sat/_ccdcl.pyx"],
                    language="c++",
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
