from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from platformdirs import user_data_dir


_MARKERS = ("pyproject.toml", ".git", ".project-root")


class ProjectRootNotFound(RuntimeError):
    """Raised when the project root directory cannot be located."""

    pass


@lru_cache(maxsize=1)
def get_project_root(depth: int = 5) -> Path:
    """Walk up from this file, bounded by ``depth``, looking for a marker."""
    current_dir = Path(__file__).resolve().parent
    for _ in range(depth):
        if any((current_dir / m).exists() for m in _MARKERS):
            return current_dir
        current_dir = current_dir.parent
    raise ProjectRootNotFound(
        f"No {_MARKERS} found walking up {depth} levels from {Path(__file__).resolve()}"
    )


def project_root_exists() -> bool:
    try:
        get_project_root()
        return True
    except ProjectRootNotFound:
        return False


def certificate_dir(name: str = "hnf") -> Path:
    """Directory for saved HNF certificates.

    Uses ``<project root>/certificates/<name>`` inside a source checkout and a
    platform user-data directory for installed copies.
    """
    if project_root_exists():
        d = get_project_root() / "certificates" / name
    else:
        d = Path(user_data_dir("fomod-toolkit")) / "certificates" / name
    d.mkdir(parents=True, exist_ok=True)
    return d


def read_text_argument(value: str) -> str:
    """Return ``value`` itself, or the contents of a file when written ``@path``."""
    if value.startswith("@"):
        return Path(value[1:]).expanduser().read_text()
    return value
