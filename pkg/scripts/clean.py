"""Clean up cache files, run outputs and the cached admissible set"""

import shutil
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from src.utils.paths import mas_cache  # noqa: E402


def remove_path(path: Path):
    if path.is_dir():
        shutil.rmtree(path, ignore_errors=True)
    elif path.is_file():
        path.unlink()


def clean_caches():
    for pattern in [
        ".pytest_cache",
        ".coverage",
        "htmlcov",
        ".ruff_cache",
        "*.egg-info",
        "build",
        "dist",
    ]:
        for path in Path(".").glob(pattern):
            remove_path(path)

    for path in Path(".").rglob("__pycache__"):
        remove_path(path)

    for pyc in Path(".").rglob("*.pyc"):
        remove_path(pyc)


def clean_outputs():
    for csv in Path(".").glob("*_pg.csv"):
        remove_path(csv)
    for csv in Path(".").glob("*_lpf.csv"):
        remove_path(csv)
    for csv in Path(".").glob("*_none.csv"):
        remove_path(csv)
    remove_path(Path("logs"))


def clean_admissible_set():
    remove_path(Path(mas_cache))


if __name__ == "__main__":
    clean_caches()
    clean_outputs()
    clean_admissible_set()
