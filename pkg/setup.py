"""Build hook for the optional compiled kernel.

The extension is skipped (pure-Python fallback) when Cython is missing or
compilation fails; set AEROCELL_REQUIRE_EXT=1 to make that an error.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            if os.environ.get("AEROCELL_REQUIRE_EXT"):
                raise
            print(f"warning: compiled kernel not built ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            if os.environ.get("AEROCELL_REQUIRE_EXT"):
                raise
            print(f"warning: {ext.name} not built ({exc})")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension("aerocell._ckernel", ["src/aerocell/_ckernel.pyx"])
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
