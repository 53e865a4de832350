"""Deterministic artifact readers/writers shared by the subcommands.

All writers produce byte-stable output for identical inputs: JSON uses
sorted keys and fixed separators, CSV uses ``\\n`` newlines and ``repr``
floats (shortest round-trip form), and row order is always defined by the
caller.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

from fundlens.embedtm.cluster import NOISE, ClusterModel
from fundlens.lda import TopicAssignment


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def write_json(path: str | Path, payload) -> None:
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )


def write_tokens_jsonl(path: str | Path, chunk_ids: Sequence[str], token_lists: Sequence[Sequence[str]]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for cid, tokens in zip(chunk_ids, token_lists):
            fh.write(json.dumps({"chunk_id": cid, "tokens": list(tokens)}, ensure_ascii=False) + "\n")


def read_tokens_jsonl(path: str | Path) -> tuple[list[str], list[list[str]]]:
    chunk_ids: list[str] = []
    token_lists: list[list[str]] = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed token JSON at line {lineno}: {exc.msg}") from exc
            chunk_ids.append(str(obj["chunk_id"]))
            token_lists.append([str(t) for t in obj["tokens"]])
    return chunk_ids, token_lists


def write_assignments_jsonl(path: str | Path, assignments: Iterable[TopicAssignment]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for a in assignments:
            fh.write(
                json.dumps({"chunk_id": a.chunk_id, "topic": a.topic, "max_prob": a.max_prob}) + "\n"
            )


def read_assignments_jsonl(path: str | Path) -> list[TopicAssignment]:
    out: list[TopicAssignment] = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed assignment JSON at line {lineno}: {exc.msg}") from exc
            max_prob = obj.get("max_prob")
            out.append(
                TopicAssignment(
                    chunk_id=str(obj["chunk_id"]),
                    topic=int(obj["topic"]),
                    max_prob=None if max_prob is None else float(max_prob),
                )
            )
    return out


def cluster_assignments(model: ClusterModel) -> list[TopicAssignment]:
    """Cluster labels as assignment records (no membership probability)."""
    return [
        TopicAssignment(chunk_id=cid, topic=topic, max_prob=None)
        for cid, topic in sorted(model.labels.items())
    ]


def noise_count(model: ClusterModel) -> int:
    return sum(1 for t in model.labels.values() if t == NOISE)
