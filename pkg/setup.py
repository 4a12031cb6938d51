import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python fallback only
    cythonize = None


def _extensions():
    if cythonize is None or os.environ.get("SBM_SPECTRAL_NO_EXT"):
        return []
    ext = Extension(
        "sbm_spectral._kernels._ckernels",
        ["src/sbm_spectral/_kernels/_ckernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=_extensions())
