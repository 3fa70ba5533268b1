import os

from setuptools import setup

ext_modules = []
if os.environ.get("SIGNPIPE_NO_EXT", "") not in ("1", "true", "yes"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        # the NumPy fallback kernels are used when the extension is absent
        pass
    else:
        ext_modules = cythonize(
            [Extension(
                "signpipe.motion._spline_ext",
                ["src/signpipe/motion/_spline_ext.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
