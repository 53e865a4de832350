"""Document ingestion from the JSONL wire format.

One JSON object per line:

    {"doc_id": str, "manager_id": str, "fund_id": str|null,
     "doc_type": str, "date": "YYYY-MM", "blocks": [str, ...]}

Unknown ``doc_type`` values map to ``"other"`` with a warning; missing dates,
duplicate ids and malformed lines are hard errors naming the offending line.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from fundlens.months import month_index, parse_month

DOC_TYPES = frozenset(
    {
        "factsheet",
        "presentation",
        "quarterly_report",
        "monthly_report",
        "investor_letter",
        "other",
    }
)

DEFAULT_DATE_MIN = "1990-01"
DEFAULT_DATE_MAX = "2100-12"


@dataclass
class RawDocument:
    doc_id: str
    manager_id: str
    fund_id: str | None
    doc_type: str
    date: str  # YYYY-MM
    blocks: list[str] = field(default_factory=list)


def _parse_line(raw: str, lineno: int) -> dict:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON at line {lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ValueError(f"malformed document at line {lineno}: expected an object")
    return obj


def ingest_documents(
    path: str | Path,
    date_min: str = DEFAULT_DATE_MIN,
    date_max: str = DEFAULT_DATE_MAX,
) -> list[RawDocument]:
    """Read and validate a document JSONL file.

    Returns every parseable document in file order. Raises ``ValueError``
    naming the line for malformed lines, duplicate ids, missing or
    out-of-range dates, and documents with no usable text blocks.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"document file not found: {path}")
    lo, hi = month_index(date_min), month_index(date_max)

    docs: list[RawDocument] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            obj = _parse_line(raw, lineno)

            doc_id = obj.get("doc_id")
            if not isinstance(doc_id, str) or not doc_id:
                raise ValueError(f"missing doc_id at line {lineno}")
            if doc_id in seen:
                raise ValueError(f"duplicate doc_id {doc_id} at line {lineno}")

            date = obj.get("date")
            if not isinstance(date, str) or not date:
                raise ValueError(f"missing date for doc_id {doc_id} at line {lineno}")
            parse_month(date)
            idx = month_index(date)
            if not lo <= idx <= hi:
                raise ValueError(
                    f"date {date} outside valid range [{date_min}, {date_max}] "
                    f"for doc_id {doc_id} at line {lineno}"
                )

            doc_type = obj.get("doc_type") or "other"
            if doc_type not in DOC_TYPES:
                warnings.warn(
                    f"unknown doc_type {doc_type!r} for doc_id {doc_id}, using 'other'",
                    stacklevel=2,
                )
                doc_type = "other"

            blocks_raw = obj.get("blocks")
            if not isinstance(blocks_raw, list):
                raise ValueError(f"missing blocks for doc_id {doc_id} at line {lineno}")
            blocks = [b for b in blocks_raw if isinstance(b, str) and b.strip()]
            if not blocks:
                raise ValueError(f"no text blocks for doc_id {doc_id} at line {lineno}")

            fund_id = obj.get("fund_id")
            if fund_id is not None and not isinstance(fund_id, str):
                raise ValueError(f"invalid fund_id for doc_id {doc_id} at line {lineno}")

            docs.append(
                RawDocument(
                    doc_id=doc_id,
                    manager_id=str(obj.get("manager_id") or ""),
                    fund_id=fund_id,
                    doc_type=doc_type,
                    date=date,
                    blocks=blocks,
                )
            )
            seen.add(doc_id)
    return docs
