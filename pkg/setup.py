import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("SEMISTAB_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "semistab.sparsekernel._modp",
                ["src/semistab/sparsekernel/_modp.pyx"],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
