import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the Cython ascent kernel if a toolchain is available.

    The package is fully functional without it: margindisc._ascent falls back
    to the numpy implementation at import time.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, headers, ...
            warnings.warn(f"compiled ascent kernel skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled ascent kernel skipped: {exc}")


ext = Extension(
    "margindisc._ascent._core",
    ["src/margindisc/_ascent/_core.pyx"],
)

try:
    from Cython.Build import cythonize

    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    ext_modules = []

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)
