from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("ddl_kant.kernel._ckernel", ["src/ddl_kant/kernel/_ckernel.pyx"], optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
