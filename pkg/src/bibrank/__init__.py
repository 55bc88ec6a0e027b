"""Bibliometric indicators, citation networks, text clustering and MCDM country ranking."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def data_path(name: str) -> Path:
    """Path of a file shipped in ``bibrank/data`` (fixtures, default configs)."""
    return Path(str(resources.files("bibrank") / "data" / name))
