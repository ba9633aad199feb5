"""Build script for the compiled permanent kernels.

The extension is optional at runtime: if the build (or import) fails the
package falls back to the numpy reference kernels in
``photonsim.permanent.reference``.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "photonsim.permanent._native",
                ["src/photonsim/permanent/_native.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
