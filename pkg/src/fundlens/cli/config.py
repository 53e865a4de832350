"""Pipeline configuration: defaults, config file, environment, flags.

Precedence: command-line flags > FUNDLENS_* environment variables > config
file > built-in defaults. The config file is JSON with the same section
layout as the defaults below; every key has a documented default printed
by ``fundlens config --print-defaults``. All randomness in a run flows
from the single top-level ``seed``.
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path

ENV_PREFIX = "FUNDLENS_"

DEFAULTS: dict = {
    "seed": 42,
    "paths": {
        "documents": None,        # raw document JSONL (ingest input)
        "embeddings_chunks": None,  # chunk embedding JSONL
        "embeddings_words": None,   # word embedding JSONL
        "sentiment": None,          # sentiment JSONL
        "returns": None,            # returns CSV
        "annotations": None,        # annotation CSV
        "assignments": None,        # assignment JSONL for senti-aggregate
        "assignments_a": None,      # stability inputs
        "assignments_b": None,
        "output_dir": "out",
    },
    "corpus": {
        "language_threshold": 0.15,
        "stopword_path": None,   # None -> shipped list
        "min_word_len": 3,
        "min_doc_freq": 5,
        "ngram_order": 1,
        "max_len": 400,
        "overlap": 50,
        "min_len": 50,
        "date_min": "1990-01",
        "date_max": "2100-12",
    },
    "lda": {
        "k": 20,
        "alpha": None,    # None -> 1/k
        "beta": None,     # None -> 1/k
        "iterations": 50,
        "burn_in": None,  # None -> iterations // 2
        "tau": 0.25,
        "top_words": 10,
    },
    "embedtm": {
        "d_target": 5,
        "reduce_method": "pca",
        "min_topic_size": 10,
        "linkage_threshold": 0.35,
        "mmr_lambda": 0.5,
        "mode": "top2vec",
        "target_k": None,
        "top_words": 10,
    },
    "eval": {
        "top_n": 10,
        "window": 110,
        "weighting": "doc_weighted",
        "umass_epsilon": 1.0,
        "cv_epsilon": 1e-12,
        "nonzero_floor": 0.05,
        "top_rows": 20,
        "top_cols": 20,
    },
    "sentperf": {
        "n_min": 6,
        "significance": 0.05,
    },
    "format": "csv",
}


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if key not in out:
            raise ValueError(f"unknown config key {key!r}")
        if isinstance(out[key], dict):
            if not isinstance(value, dict):
                raise ValueError(f"config key {key!r} must be an object")
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


@dataclass
class PipelineConfig:
    data: dict

    @classmethod
    def load(
        cls,
        config_path: str | Path | None = None,
        seed: int | None = None,
        output_dir: str | None = None,
        fmt: str | None = None,
        environ: dict | None = None,
    ) -> "PipelineConfig":
        environ = os.environ if environ is None else environ
        merged = copy.deepcopy(DEFAULTS)
        if config_path is None and environ.get(ENV_PREFIX + "CONFIG"):
            config_path = environ[ENV_PREFIX + "CONFIG"]
        if config_path is not None:
            path = Path(config_path)
            if not path.exists():
                raise FileNotFoundError(f"config file not found: {path}")
            try:
                file_data = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ValueError(f"invalid config JSON in {path}: {exc.msg}") from exc
            merged = _deep_merge(merged, file_data)
        if environ.get(ENV_PREFIX + "SEED"):
            merged["seed"] = int(environ[ENV_PREFIX + "SEED"])
        if environ.get(ENV_PREFIX + "OUTPUT"):
            merged["paths"]["output_dir"] = environ[ENV_PREFIX + "OUTPUT"]
        if environ.get(ENV_PREFIX + "FORMAT"):
            merged["format"] = environ[ENV_PREFIX + "FORMAT"]
        if seed is not None:
            merged["seed"] = seed
        if output_dir is not None:
            merged["paths"]["output_dir"] = output_dir
        if fmt is not None:
            merged["format"] = fmt
        if merged["format"] not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {merged['format']!r}")
        return cls(data=merged)

    def section(self, name: str) -> dict:
        return self.data[name]

    @property
    def seed(self) -> int:
        return int(self.data["seed"])

    @property
    def fmt(self) -> str:
        return self.data["format"]

    @property
    def output_dir(self) -> Path:
        return Path(self.data["paths"]["output_dir"])

    def input_path(self, key: str) -> Path:
        """Configured input path; raises when unset or missing on disk."""
        value = self.data["paths"].get(key)
        if not value:
            raise ValueError(f"config paths.{key} is not set")
        path = Path(value)
        if not path.exists():
            raise FileNotFoundError(f"paths.{key} does not exist: {path}")
        return path

    def optional_path(self, key: str) -> Path | None:
        value = self.data["paths"].get(key)
        if not value:
            return None
        path = Path(value)
        if not path.exists():
            raise FileNotFoundError(f"paths.{key} does not exist: {path}")
        return path

    def artifact(self, name: str) -> Path:
        """Path of a pipeline artifact under the output directory."""
        return self.output_dir / name

    def require_artifact(self, name: str, produced_by: str) -> Path:
        path = self.artifact(name)
        if not path.exists():
            raise FileNotFoundError(
                f"missing upstream artifact {name} (run `fundlens {produced_by}` first)"
            )
        return path

    def config_hash(self) -> str:
        canonical = json.dumps(self.data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def print_defaults() -> str:
    return json.dumps(DEFAULTS, indent=2, sort_keys=True)
