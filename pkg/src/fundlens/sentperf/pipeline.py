"""Sentiment-to-performance pipeline.

Per-chunk sentiment scores join topic assignments and chunk metadata into
fund x topic x month mean-sentiment records; those pair with the
*following* month's fund return, and per-fund correlations roll up into
per-topic significance summaries.

Missing scores are absent, never zero. Outlier-assigned chunks and chunks
without a fund are excluded from this analysis.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from fundlens.corpus.chunking import Chunk
from fundlens.lda import OUTLIER, TopicAssignment
from fundlens.months import month_index
from fundlens.sentperf.stats import DEFAULT_N_MIN, pearson_r, t_test_one_sample

DEFAULT_SIGNIFICANCE = 0.05


@dataclass
class SentimentRecord:
    chunk_id: str
    model_id: str
    score: float | None  # in [-1, 1] when present

    def validate(self) -> None:
        if self.score is not None and not (-1.0 <= self.score <= 1.0):
            raise ValueError(f"score {self.score} for chunk {self.chunk_id} outside [-1, 1]")


@dataclass
class FundReturn:
    fund_id: str
    month: str  # YYYY-MM
    ret: float  # decimal return (0.01 = 1%)


@dataclass
class TopicMonthSentiment:
    fund_id: str
    topic: int
    month: str
    mean_score: float
    n_chunks: int


@dataclass
class TopicCorrelationSummary:
    topic: int
    count: int
    mean: float
    std: float
    p_value: float | None
    significant: bool
    annotation: str | None = None


def read_sentiment_jsonl(path: str | Path) -> list[SentimentRecord]:
    """Read sentiment records: {"chunk_id": str, "model": str, "score": float|null}."""
    path = Path(path)
    records: list[SentimentRecord] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed sentiment JSON at line {lineno}: {exc.msg}") from exc
            score = obj.get("score")
            if score is not None:
                score = float(score)
                if not math.isfinite(score):
                    raise ValueError(f"non-finite score at line {lineno}")
            rec = SentimentRecord(chunk_id=str(obj["chunk_id"]), model_id=str(obj["model"]), score=score)
            rec.validate()
            records.append(rec)
    return records


def read_returns_csv(path: str | Path) -> list[FundReturn]:
    """Read the returns table: header ``fund_id,month,ret``, month as YYYY-MM."""
    import csv

    path = Path(path)
    out: list[FundReturn] = []
    seen: set[tuple[str, str]] = set()
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["fund_id", "month", "ret"]:
            raise ValueError("returns CSV must have header fund_id,month,ret")
        for lineno, rec in enumerate(reader, start=2):
            fund_id, month = rec["fund_id"].strip(), rec["month"].strip()
            month_index(month)  # validates format
            key = (fund_id, month)
            if key in seen:
                raise ValueError(f"duplicate (fund_id, month) {key} at line {lineno}")
            seen.add(key)
            ret = float(rec["ret"])
            if not math.isfinite(ret):
                raise ValueError(f"non-finite return at line {lineno}")
            out.append(FundReturn(fund_id=fund_id, month=month, ret=ret))
    return out


def aggregate_sentiment(
    records: Sequence[SentimentRecord],
    assignments: Sequence[TopicAssignment],
    chunks: Sequence[Chunk],
    model_id: str | None = None,
) -> list[TopicMonthSentiment]:
    """Mean present scores per (fund, topic, month).

    Outlier-assigned chunks are excluded; chunks without a fund are skipped
    with a single counted warning; groups with no present scores emit nothing.
    """
    if model_id is not None:
        records = [r for r in records if r.model_id == model_id]
    else:
        model_ids = {r.model_id for r in records}
        if len(model_ids) > 1:
            raise ValueError(f"records mix sentiment models {sorted(model_ids)}; pass model_id")

    topic_of = {a.chunk_id: a.topic for a in assignments}
    chunk_by_id = {c.chunk_id: c for c in chunks}

    groups: dict[tuple[str, int, str], list[float]] = {}
    skipped_no_fund = 0
    for rec in records:
        rec.validate()
        chunk = chunk_by_id.get(rec.chunk_id)
        if chunk is None:
            raise ValueError(f"sentiment record references unknown chunk {rec.chunk_id}")
        if rec.chunk_id not in topic_of:
            raise ValueError(f"no topic assignment for chunk {rec.chunk_id}")
        topic = topic_of[rec.chunk_id]
        if topic == OUTLIER or rec.score is None:
            continue
        if chunk.fund_id is None:
            skipped_no_fund += 1
            continue
        if chunk.date is None:
            raise ValueError(f"chunk {rec.chunk_id} has no date")
        groups.setdefault((chunk.fund_id, topic, chunk.date), []).append(rec.score)

    if skipped_no_fund:
        warnings.warn(f"skipped {skipped_no_fund} scored chunks without fund_id", stacklevel=2)

    return [
        TopicMonthSentiment(
            fund_id=fund, topic=topic, month=month,
            mean_score=float(np.mean(scores)), n_chunks=len(scores),
        )
        for (fund, topic, month), scores in sorted(groups.items())
    ]


def lag_join(
    sentiments: Sequence[TopicMonthSentiment],
    returns: Sequence[FundReturn],
) -> dict[tuple[str, int], list[tuple[float, float]]]:
    """Pair each (fund, topic, month) sentiment with the next month's return.

    Months with no following-month return drop out; December pairs with
    January of the next year. Series are ordered by month.
    """
    ret_by_key = {(r.fund_id, month_index(r.month)): r.ret for r in returns}
    series: dict[tuple[str, int], list[tuple[int, float, float]]] = {}
    for s in sentiments:
        idx = month_index(s.month)
        nxt = ret_by_key.get((s.fund_id, idx + 1))
        if nxt is None:
            continue
        series.setdefault((s.fund_id, s.topic), []).append((idx, s.mean_score, nxt))
    return {
        key: [(score, ret) for _, score, ret in sorted(evts)]
        for key, evts in sorted(series.items())
    }


def fund_topic_correlations(
    paired: Mapping[tuple[str, int], Sequence[tuple[float, float]]],
    n_min: int = DEFAULT_N_MIN,
) -> dict[int, list[tuple[str, float]]]:
    """Per-topic lists of (fund_id, correlation); undefined correlations drop out."""
    out: dict[int, list[tuple[str, float]]] = {}
    for (fund_id, topic), pairs in sorted(paired.items()):
        r = pearson_r([p[0] for p in pairs], [p[1] for p in pairs], n_min=n_min)
        if r is not None:
            out.setdefault(topic, []).append((fund_id, r))
    return out


def summarize_topics(
    correlations_by_topic: Mapping[int, Sequence[float]],
    significance: float = DEFAULT_SIGNIFICANCE,
    annotations: Mapping[int, str] | None = None,
) -> list[TopicCorrelationSummary]:
    """Count/mean/std and one-sample t-test p-value per topic, sorted by topic."""
    out: list[TopicCorrelationSummary] = []
    for topic in sorted(correlations_by_topic):
        values = [float(v) for v in correlations_by_topic[topic]]
        if not values:
            continue
        count = len(values)
        mean = float(np.mean(values))
        std = float(np.std(values, ddof=1)) if count >= 2 else 0.0
        p_value = t_test_one_sample(values).p_value
        out.append(
            TopicCorrelationSummary(
                topic=topic,
                count=count,
                mean=mean,
                std=std,
                p_value=p_value,
                significant=p_value is not None and p_value < significance,
                annotation=annotations.get(topic) if annotations else None,
            )
        )
    return out


def write_sentiment_jsonl(records: Iterable[SentimentRecord], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                json.dumps({"chunk_id": rec.chunk_id, "model": rec.model_id, "score": rec.score})
                + "\n"
            )
