"""Build script: compiles the optional enumeration kernel.

The package is pure Python; the Cython extension only accelerates the
lattice-point box scan. If Cython or a C compiler is unavailable the
install proceeds without it and stackyfan.kernels falls back to the
pure-Python implementation.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "stackyfan._enumcy",
                ["src/stackyfan/_enumcy.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - environment dependent
    print(f"stackyfan: building without compiled kernel ({exc})")

setup(ext_modules=ext_modules)
