"""Build script: compiles the optional Cython kernel extension.

The extension accelerates the hot grid scans (rate formulas, regime margins,
log-determinant mutual information).  If compilation is impossible the
install still succeeds and the package falls back to the NumPy kernels in
``dirty_region._kernels.pure``.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"WARNING: skipping compiled kernels ({exc}); "
                  "using pure-Python backend", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"WARNING: could not compile {ext.name} ({exc}); "
                  "using pure-Python backend", file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover
        return []
    return cythonize(
        ["src/dirty_region/_kernels/fastkern.pyx"],
        language_level="3",
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
