"""Build script for the compiled determinant kernel.

The package works without the extension (a numpy fallback is selected at
import time), but the compiled kernel is what makes million-sample Monte
Carlo runs practical on a single core.
"""
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "wigdet._detkernel",
        sources=["src/wigdet/_detkernel.pyx"],
    ),
]

setup(
    ext_modules=cythonize(extensions, language_level=3),
)
