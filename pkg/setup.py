"""Build script: compiles the optional bitset kernels.

The compiled extension is a pure accelerator; if Cython or a C compiler is
missing the build falls through and the package runs on the pure-Python
kernels. Set LATTICECELL_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that degrades to the pure-Python kernels on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"warning: skipping compiled kernels ({exc}); "
              "falling back to pure-Python kernels")


ext_modules = []
if not os.environ.get("LATTICECELL_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("latticecell._kernels", ["src/latticecell/_kernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        print("warning: Cython not available; using pure-Python kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
