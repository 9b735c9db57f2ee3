"""Builds the optional compiled kernels; the package works without them."""

from setuptools import setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(["src/frobkit/_kernels.pyx"], quiet=True,
                            compiler_directives={"language_level": "3"})


class OptionalBuildExt(build_ext):
    """A failed compile leaves the pure-Python kernels in charge."""

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"frobkit: compiled kernels skipped ({exc})")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
