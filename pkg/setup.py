# Build the optional Cython kernels:
#   pip install -e . --no-build-isolation
#   python setup.py build_ext --inplace
# If compilation fails the package still installs and falls back to
# treelab._pykernels at import time.
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "treelab._ckernels",
                ["src/treelab/_ckernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
