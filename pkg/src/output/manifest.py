"""Run manifests, timing and error files."""

import platform
from importlib import metadata
from pathlib import Path
from typing import Dict, Iterable, Union

from .json_output import write_json
from ..errors import RoleModelError
from ..models import RunConfig

MANIFEST_FILE = "manifest.json"
TIMING_FILE = "timing.json"
ERROR_FILE = "error.json"
PACKAGES = ["numpy", "scipy", "scikit-learn", "pydantic", "click", "rich"]


def package_versions() -> Dict[str, str]:
    """Versions of the interpreter, RoleModel and its numeric stack."""
    from .. import __version__

    versions = {"python": platform.python_version(), "rolemodel": __version__}
    for package in PACKAGES:
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def write_manifest(
    output_dir: Union[str, Path], run: RunConfig, outputs: Iterable[str]
) -> Path:
    """Write the manifest needed to re-run a command; no timestamps are recorded."""
    path = Path(output_dir) / MANIFEST_FILE
    write_json(path, {
        "run": run.model_dump(mode="json"),
        "seed": run.seed,
        "versions": package_versions(),
        "outputs": sorted(set(outputs)),
    })
    return path


def write_timing(output_dir: Union[str, Path], steps: Dict[str, float]) -> Path:
    """Wall-clock seconds per step; the only non-deterministic output."""
    path = Path(output_dir) / TIMING_FILE
    write_json(path, {name: round(seconds, 6) for name, seconds in steps.items()})
    return path


def write_error(output_dir: Union[str, Path], error: RoleModelError) -> Path:
    path = Path(output_dir) / ERROR_FILE
    write_json(path, error.to_dict())
    return path
