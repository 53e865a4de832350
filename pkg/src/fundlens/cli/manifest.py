"""Run manifests: provenance for every subcommand invocation.

A manifest records the command, resolved config hash, input/output file
digests, tool version and wall time, and is written atomically (temp file
plus rename) after the command's outputs are complete. Output digests
exclude the manifest itself, so rerunning a command with identical inputs
must reproduce identical artifact digests.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import fundlens


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    config_hash: str
    inputs: dict[str, str] = field(default_factory=dict)   # path -> sha256
    outputs: dict[str, str] = field(default_factory=dict)  # relative path -> sha256
    tool_version: str = fundlens.__version__
    wall_time_s: float = 0.0
    _started: float = field(default_factory=time.monotonic, repr=False)

    def add_input(self, path: str | Path) -> None:
        self.inputs[str(path)] = file_digest(path)

    def add_output(self, path: str | Path, output_dir: str | Path) -> None:
        rel = os.path.relpath(str(path), str(output_dir))
        self.outputs[rel] = file_digest(path)

    def write(self, output_dir: str | Path) -> Path:
        self.wall_time_s = round(time.monotonic() - self._started, 6)
        target = Path(output_dir) / f"manifest_{self.command.replace('-', '_')}.json"
        payload = {
            "command": self.command,
            "config_hash": self.config_hash,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": dict(sorted(self.outputs.items())),
            "tool_version": self.tool_version,
            "wall_time_s": self.wall_time_s,
        }
        fd, tmp_name = tempfile.mkstemp(dir=str(output_dir), prefix=".manifest-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=1, sort_keys=True)
                fh.write("\n")
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        return target


class OutputLock:
    """Single-writer lock on the output directory (exclusive lock file)."""

    def __init__(self, output_dir: str | Path):
        self.path = Path(output_dir) / ".fundlens.lock"
        self._fd: int | None = None

    def __enter__(self) -> "OutputLock":
        try:
            self._fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise ValueError(
                f"output directory is locked by another run (remove {self.path} if stale)"
            ) from None
        os.write(self._fd, str(os.getpid()).encode())
        return self

    def __exit__(self, *exc_info) -> None:
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None
        if self.path.exists():
            self.path.unlink()
