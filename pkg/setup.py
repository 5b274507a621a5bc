import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "caprob.kernels._native",
                ["src/caprob/kernels/_native.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off keeps bin-index arithmetic bit-identical
                # to the numpy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    sys.stderr.write(
        f"caprob: compiled kernels skipped ({exc}); pure-numpy backend will be used\n"
    )

setup(ext_modules=ext_modules)
