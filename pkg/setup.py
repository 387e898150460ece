import os

from setuptools import Extension, setup

# The compiled kernels are an optional speedup; `suppq` falls back to the
# pure-Python twin in suppq/_pykernels.py when the extension is absent.
# Set SUPPQ_NO_EXT=1 to skip building it.
extensions = []
if not os.environ.get("SUPPQ_NO_EXT"):
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("suppq._ckernels", ["src/suppq/_ckernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
