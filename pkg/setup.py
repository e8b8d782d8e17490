"""Build script: compiles the optional extension module with the hot kernels.

If Cython or a C compiler is unavailable the build falls back to a
pure-Python install; semifields.kernels then selects the pure backend at
import time.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, otherwise install pure Python."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"warning: extension build skipped ({exc}); "
                  "falling back to the pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python kernels")


def extensions():
    import os

    if not os.path.exists("src/semifields/_core.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "semifields._core",
                ["src/semifields/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
