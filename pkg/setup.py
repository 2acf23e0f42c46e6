import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled estimator loops bit-identical to the
# vectorized fallback (no fused multiply-adds).
setup(
    ext_modules=cythonize(
        [
            Extension(
                "quantest._kernels",
                ["src/quantest/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
)
