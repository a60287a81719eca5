"""Build script: compiles the enumeration/filter kernels as a C extension.

The extension is optional.  If the build fails (no compiler, no Cython) the
package falls back to the pure-Python kernels in linscat._pykernels.
"""

from setuptools import setup, Extension
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print("warning: compiled kernels unavailable (%s); using pure-Python fallback" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print("warning: failed to build %s (%s); using pure-Python fallback" % (ext.name, exc))


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("linscat._speedups", ["src/linscat/_speedups.pyx"])
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
