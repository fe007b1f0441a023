"""Builds the Rust extension with cargo and places it inside the package.

The extension crate lives at crates/py and produces a cdylib; build_ext
copies it into python/torsion_py/ under the interpreter's extension
suffix so both editable and regular installs import the same file.
"""

import shutil
import subprocess
import sysconfig
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ROOT = Path(__file__).resolve().parent


class CargoExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CargoBuildExt(build_ext):
    def run(self):
        subprocess.run(
            ["cargo", "build", "--release", "-p", "torsion-py"],
            check=True,
            cwd=ROOT,
        )
        built = ROOT / "target" / "release" / "libtorsion_py_native.so"
        suffix = sysconfig.get_config_var("EXT_SUFFIX")
        dest = ROOT / "python" / "torsion_py" / f"_native{suffix}"
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built, dest)
        if not self.inplace:
            target = Path(self.build_lib) / "torsion_py" / dest.name
            target.parent.mkdir(parents=True, exist_ok=True)
            shutil.copy2(dest, target)


setup(
    ext_modules=[CargoExtension("torsion_py._native")],
    cmdclass={"build_ext": CargoBuildExt},
)
