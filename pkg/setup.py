"""Builds the optional Cython kernel extension.

The package works without it: moodwear._kernels falls back to the numpy
reference implementation when the extension is missing.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "moodwear._kernels._fastpath",
                ["src/moodwear/_kernels/_fastpath.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off keeps the compiled kernels bit-identical
                # to the numpy fallback (no FMA re-association).
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
