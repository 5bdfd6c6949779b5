"""Build wiring for the optional compiled kernel core.

The extension is a speedup, not a requirement: if compilation fails the
package installs anyway and `sprayplan.kernels` falls back to the NumPy
implementation at import time.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  f"the NumPy fallback will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "sprayplan.kernels._core",
        ["src/sprayplan/kernels/_core.pyx"],
        # -ffp-contract=off: forbid FMA contraction so the compiled kernels
        # round exactly like the NumPy fallback (tested bit-for-bit).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
