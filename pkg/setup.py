"""Build glue: compile the Rust extension with cargo and drop it where
setuptools expects the compiled module."""

import pathlib
import shutil
import subprocess

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

CRATE_DIR = pathlib.Path(__file__).resolve().parent / "rust"
# cargo names the artifact by platform; try each
ARTIFACT_NAMES = ("lib_backend.so", "lib_backend.dylib", "_backend.dll")


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        subprocess.run(["cargo", "build", "--release"], cwd=CRATE_DIR, check=True)
        release_dir = CRATE_DIR / "target" / "release"
        for name in ARTIFACT_NAMES:
            built = release_dir / name
            if built.exists():
                break
        else:
            raise RuntimeError(f"cargo produced no extension artifact in {release_dir}")
        dest = pathlib.Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built, dest)


setup(
    ext_modules=[Extension("pplist._backend", sources=[])],
    cmdclass={"build_ext": CargoBuildExt},
)
