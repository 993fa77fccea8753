"""Build script for the optional Cython kernels.

The extension is optional: if Cython or a C compiler is unavailable the
package installs anyway and ``cyclophase.kernels`` falls back to the
pure-Python implementations.
"""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            sys.stderr.write(f"warning: Cython kernels not built ({exc})\n")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            sys.stderr.write(f"warning: failed to build {ext.name} ({exc})\n")


def extensions():
    if os.environ.get("CYCLOPHASE_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    # No -ffast-math / -march=native: kernels must stay bit-compatible with libm.
    ext = Extension(
        "cyclophase._kernels",
        ["src/cyclophase/_kernels.pyx"],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
