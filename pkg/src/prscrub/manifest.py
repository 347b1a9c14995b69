"""Run manifests: every artifact a command writes gets a sibling
``<artifact>.manifest.json`` recording the command, its configuration,
and the SHA-256 of every input and output, so artifacts chain by hash
across pipeline stages."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

from . import __version__


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def manifest_path(artifact: str | Path) -> Path:
    artifact = Path(artifact)
    return artifact.with_name(artifact.name + ".manifest.json")


def write_manifests(
    command: str,
    config: dict,
    inputs: list[str | Path],
    outputs: list[str | Path],
) -> list[Path]:
    """Write one manifest per output artifact; returns the manifest paths."""
    payload = {
        "tool": "prscrub",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": {Path(p).name: file_sha256(p) for p in inputs},
        "outputs": {Path(p).name: file_sha256(p) for p in outputs},
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    written = []
    for artifact in outputs:
        target = manifest_path(artifact)
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(target)
    return written


def load_manifest(artifact: str | Path) -> dict:
    with open(manifest_path(artifact), "r", encoding="utf-8") as fh:
        return json.load(fh)
