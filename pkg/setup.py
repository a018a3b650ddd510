import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install, kernels fall back to numpy
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("MEANMETRICS_NO_EXT"):
    extra = ["/O2"] if os.name == "nt" else ["-O3"]
    ext_modules = cythonize(
        [
            Extension(
                "meanmetrics._kernels._ckernels",
                ["src/meanmetrics/_kernels/_ckernels.pyx"],
                extra_compile_args=extra,
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
