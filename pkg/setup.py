import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # fallback stepper is used at runtime
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("HOLLINGTANNER_PURE_PYTHON"):
    ext_modules = cythonize(
        [
            Extension(
                "hollingtanner._ext.stepper",
                ["src/hollingtanner/_ext/stepper.pyx"],
                depends=["src/hollingtanner/_ext/stepper_core.h"],
                include_dirs=[np.get_include(), "src/hollingtanner/_ext"],
                # no FMA contraction: keeps results bit-identical to the numpy fallback
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
