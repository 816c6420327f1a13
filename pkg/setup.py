"""Builds the optional compiled kernels; the package works without them."""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("mvklr._ckernels", ["src/mvklr/_ckernels.pyx"], include_dirs=[np.get_include()], extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except Exception as exc:  # Cython or a compiler missing: pure-Python kernels are used
    print(f"skipping compiled kernels: {exc}")

setup(ext_modules=ext_modules)
