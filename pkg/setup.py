"""Build script.

The package is pure Python except for an optional compiled kernel holding the
hot integer-elimination loops.  If Cython or a C compiler is unavailable the
build silently falls back to the pure-Python kernel; torsal._kernel selects
whichever is importable at run time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/torsal/_kernel/_speedups.pyx"],
        compiler_directives={"language_level": 3},
    )
except Exception as exc:  # pragma: no cover - depends on build environment
    print(f"building without compiled kernel: {exc}")

setup(ext_modules=ext_modules)
