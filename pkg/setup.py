from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("adiaquant._kernels", ["src/adiaquant/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # the package runs on the numpy fallback without the extension
    extensions = []

setup(ext_modules=extensions)
