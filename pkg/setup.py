"""Build script.

The genus-search kernel has a compiled Cython variant.  The extension is
optional: when Cython or a C compiler is unavailable the install falls back
to the pure-Python implementation selected at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "combtop._genus_c",
                ["src/combtop/_genus_c.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.optional = True
except ImportError:
    pass

setup(ext_modules=ext_modules)
