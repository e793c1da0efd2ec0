"""
OAM-Holo Simulator - Run Manifest
=================================

Every CLI run writes a manifest.json next to its outputs: a bundle of file
entries with SHA-256 digests, the fully resolved configuration (defaults
included), the seed and the artifact version. The light-source record
(pump wavelength and bandwidth) is kept although photons are simulated
monochromatic.

The content hash covers only the output files (sorted by name), so two runs
of the same configuration and seed share it even though their timestamps
differ.
"""

import hashlib
import json
from datetime import datetime
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

from src import __version__, defaults


def file_sha256(path: Path) -> str:
    """Hex SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


class ManifestEntry(BaseModel):
    """One output file."""

    name: str = Field(..., description="File name relative to the output directory")
    kind: Literal["pgm", "png", "csv", "json", "txt"] = Field(..., description="Output format")
    sha256: str = Field(..., min_length=64, max_length=64)
    size_bytes: int = Field(..., ge=0)
    sweep_value: Optional[Any] = Field(None, description="Sweep value that produced the file")


def source_record() -> dict:
    return {"pump_wavelength_nm": defaults.PUMP_WAVELENGTH_NM, "bandwidth_nm": defaults.BANDWIDTH_NM}


class RunManifest(BaseModel):
    """Bundle describing one CLI run."""

    resourceType: Literal["RunManifest"] = "RunManifest"
    command: Literal["hologram", "beam", "correlate", "efficiency"]
    artifact_version: str = __version__
    created_at: str = Field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))
    seed: Optional[int] = None
    sweep: Optional[str] = None
    config: dict = Field(default_factory=dict, description="Resolved configuration")
    source: dict = Field(default_factory=source_record, description="Light source; photons are simulated monochromatic")
    summary: dict = Field(default_factory=dict, description="Headline numbers of the run")
    entries: list[ManifestEntry] = Field(default_factory=list)

    def add_file(self, path: Path, sweep_value: Any = None) -> ManifestEntry:
        """Hash a written file and append its entry."""
        path = Path(path)
        entry = ManifestEntry(
            name=path.name,
            kind=path.suffix.lstrip(".").lower(),
            sha256=file_sha256(path),
            size_bytes=path.stat().st_size,
            sweep_value=sweep_value,
        )
        self.entries.append(entry)
        return entry

    @property
    def content_hash(self) -> str:
        """SHA-256 over the sorted (name, digest) pairs of all outputs."""
        pairs = sorted((e.name, e.sha256) for e in self.entries)
        return hashlib.sha256(json.dumps(pairs, sort_keys=True).encode()).hexdigest()

    def to_json(self) -> dict:
        data = self.model_dump(exclude_none=True)
        data["content_hash"] = self.content_hash
        return data

    def write(self, out_dir: Path) -> Path:
        path = Path(out_dir) / "manifest.json"
        path.write_text(json.dumps(self.to_json(), indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
        return path
