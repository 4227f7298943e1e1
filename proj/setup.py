import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "styre._styre",
    sorted(glob.glob("src/*.cpp")) + ["python/bindings.cpp"],
    include_dirs=["include", "vendor", "/usr/include/eigen3"],
    cxx_std=20,
    define_macros=[("STYRE_VERSION", '"0.1.0"')],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
