"""Build script: compiles the optional integer-rank kernel.

The package works without the extension (a pure-Python fallback is selected
at import time), so a missing Cython or C compiler must not fail the install.
Run ``python setup.py build_ext --inplace`` to compile in a source checkout.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "minctrl._kernels._fastrank",
                ["src/minctrl/_kernels/_fastrank.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
