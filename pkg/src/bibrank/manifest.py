"""Run manifests: what went in, what came out, with content digests."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

__all__ = ["RunManifest", "sha256_file", "read_manifest"]


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: list[str]
    tool_version: str
    inputs: dict[str, str] = field(default_factory=dict)
    configs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def add_inputs(self, paths: Iterable[str | Path | None]) -> None:
        for p in paths:
            if p is not None:
                self.inputs[str(p)] = sha256_file(p)

    def add_configs(self, paths: Iterable[str | Path | None]) -> None:
        for p in paths:
            if p is not None:
                self.configs[str(p)] = sha256_file(p)

    def add_outputs(self, paths: Iterable[str | Path], root: str | Path | None = None) -> None:
        for p in paths:
            key = Path(p).relative_to(root).as_posix() if root is not None else str(p)
            self.outputs[key] = sha256_file(p)

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path


def read_manifest(path: str | Path) -> RunManifest:
    return RunManifest(**json.loads(Path(path).read_text(encoding="utf-8")))
