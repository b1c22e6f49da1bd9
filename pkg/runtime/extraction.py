"""Copies of packaged resources for users to edit"""

import shutil
from importlib import resources
from pathlib import Path

from src.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_PARAMS_NAME = "default_params.json"


def extract_default_params(dest: Path, overwrite: bool = False) -> Path:
    """Copy the shipped human-unit parameter document to ``dest``.

    Args:
        dest (Path): Destination file; parent directories are created.
        overwrite (bool): Replace an existing file instead of refusing.

    Returns:
        Path: The written file.

    Raises:
        FileExistsError: If ``dest`` exists and ``overwrite`` is false, so an
            edited parameter file is never replaced silently.
    """
    if dest.exists() and not overwrite:
        raise FileExistsError(f"{dest} already exists, pass --force to replace it")
    dest.parent.mkdir(parents=True, exist_ok=True)

    with resources.as_file(resources.files("src.resources") / DEFAULT_PARAMS_NAME) as src:
        shutil.copyfile(src, dest)
    logger.info(f"Parameter template copied to {dest}")
    return dest
