import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernel is an optional accelerator; mbim.kernels falls back to
# the pure-Python mirror when the extension is unavailable.
extensions = [
    Extension(
        "mbim._speedups",
        ["src/mbim/_speedups.pyx"],
        optional=True,
    )
]

if cythonize is not None and not os.environ.get("MBIM_NO_EXT"):
    ext_modules = cythonize(
        extensions, compiler_directives={"language_level": "3"}
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
