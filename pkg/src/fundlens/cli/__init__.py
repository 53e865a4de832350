"""Pipeline CLI: configuration, manifests, reports, subcommand dispatch."""

from fundlens.cli.config import DEFAULTS, PipelineConfig, print_defaults
from fundlens.cli.main import main
from fundlens.cli.manifest import OutputLock, RunManifest, file_digest

__all__ = [
    "DEFAULTS",
    "OutputLock",
    "PipelineConfig",
    "RunManifest",
    "file_digest",
    "main",
    "print_defaults",
]
