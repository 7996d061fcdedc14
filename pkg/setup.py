"""Build script.  The compiled pair-loop kernels are optional: if Cython or a
C compiler is unavailable the package installs anyway and falls back to the
NumPy implementation at import time."""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/fracorlicz/_kernels.pyx"],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())
        ext.define_macros.append(("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION"))
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    print("fracorlicz: skipping compiled kernels (%s); NumPy fallback will be used" % exc)
    ext_modules = []

setup(ext_modules=ext_modules)
