"""Run manifest: inputs, resolved parameters and checksums of every emitted file."""

from __future__ import annotations

import hashlib
import logging
import time
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field

from errors import OutputError
from runner import __version__

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
_CHUNK = 1 << 20


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(_CHUNK), b""):
            digest.update(chunk)
    return digest.hexdigest()


class OutputRecord(BaseModel):
    path: str  # relative to the manifest directory
    sha256: str
    size_bytes: int


class RunManifest(BaseModel):
    """Everything needed to re-run a command and check its outputs."""

    command: str
    tool_version: str = __version__
    master_seed: int | None = None
    configs: list[dict[str, Any]] = Field(default_factory=list)
    resolved: list[dict[str, Any]] = Field(default_factory=list)
    arguments: dict[str, Any] = Field(default_factory=dict)
    outputs: list[OutputRecord] = Field(default_factory=list)
    timings_s: dict[str, float] = Field(default_factory=dict)

    def record(self, path: Path, root: Path) -> None:
        """Checksum an emitted file and list it."""
        self.outputs.append(
            OutputRecord(
                path=path.relative_to(root).as_posix(),
                sha256=sha256_file(path),
                size_bytes=path.stat().st_size,
            )
        )

    def record_timing(self, label: str, started: float) -> None:
        """Store the wall-clock seconds elapsed since ``started`` (a perf_counter value)."""
        self.timings_s[label] = round(time.perf_counter() - started, 6)

    def write(self, root: Path) -> Path:
        """Write ``manifest.json`` into ``root``.

        Raises:
            OutputError: If the file cannot be written.
        """
        path = root / MANIFEST_NAME
        try:
            root.mkdir(parents=True, exist_ok=True)
            path.write_text(self.model_dump_json(indent=2) + "\n")
        except OSError as exc:
            raise OutputError(f"Cannot write {path}: {exc}") from exc
        logger.info("Manifest written to %s (%d outputs)", path, len(self.outputs))
        return path

    @classmethod
    def load(cls, path: Path) -> RunManifest:
        return cls.model_validate_json(path.read_text())

    def verify(self, root: Path) -> list[str]:
        """Paths whose current checksum no longer matches the manifest."""
        return [
            rec.path
            for rec in self.outputs
            if not (root / rec.path).exists() or sha256_file(root / rec.path) != rec.sha256
        ]
