"""Annotation tables and the disclosure classification rule.

Topics are annotated with percentage breakdowns over seven fixed
categories. A topic is a positive prediction when less than half of its
sampled texts are Disclosure; text-level precision/recall propagate each
topic's label to its texts, weighted by member count (``doc_weighted``) or
uniformly (``equal_weighted``).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

CATEGORY_LABELS = (
    "Disclosure",
    "Fund Terms",
    "Investment Team",
    "Market Update",
    "Performance Commentary",
    "Strategy Overview",
    "Other",
)

WEIGHTINGS = ("doc_weighted", "equal_weighted")

PERCENT_SUM_TOLERANCE = 0.1
DISCLOSURE_POSITIVE_CUTOFF = 50.0


@dataclass
class AnnotationRow:
    topic_id: int
    percentages: dict[str, float]  # category -> percent, sums to 100
    n_samples: int
    n_members: int

    def validate(self) -> None:
        unknown = set(self.percentages) - set(CATEGORY_LABELS)
        if unknown:
            raise ValueError(f"unknown categories {sorted(unknown)} for topic {self.topic_id}")
        total = sum(self.percentages.values())
        if abs(total - 100.0) > PERCENT_SUM_TOLERANCE:
            raise ValueError(
                f"topic {self.topic_id} percentages sum to {total}, expected 100 +- {PERCENT_SUM_TOLERANCE}"
            )
        if self.n_samples < 1:
            raise ValueError(f"topic {self.topic_id} needs n_samples >= 1")

    def percent(self, category: str) -> float:
        return self.percentages.get(category, 0.0)


@dataclass
class AnnotationTable:
    model_id: str
    rows: list[AnnotationRow]

    def validate(self) -> None:
        if not self.rows:
            raise ValueError(f"annotation table {self.model_id!r} has no rows")
        for row in self.rows:
            row.validate()


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    weighting: str


def f1_from_pr(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def topic_predicted_class(row: AnnotationRow) -> tuple[str, float]:
    """Dominant category and its percentage; ties go alphabetically."""
    best = min(CATEGORY_LABELS, key=lambda c: (-row.percent(c), c))
    return best, row.percent(best)


def disclosure_prf(table: AnnotationTable, weighting: str = "doc_weighted") -> ClassMetrics:
    """Precision/recall/F1 of the disclosure rule with text-level propagation.

    Positive topics (Disclosure% < 50) predict all their texts positive;
    a text is truly positive when it is not Disclosure, so each topic
    contributes ``(100 - Disclosure%) / 100`` of its weight as relevant mass.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {weighting!r}")
    table.validate()
    tp = fp = fn = 0.0
    n_positive = 0
    for row in table.rows:
        d = row.percent("Disclosure") / 100.0
        weight = float(row.n_members) if weighting == "doc_weighted" else 1.0
        if row.percent("Disclosure") < DISCLOSURE_POSITIVE_CUTOFF:
            n_positive += 1
            tp += (1.0 - d) * weight
            fp += d * weight
        else:
            fn += (1.0 - d) * weight
    if n_positive == 0:
        raise ValueError("no positive topics")
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return ClassMetrics(precision=precision, recall=recall, f1=f1_from_pr(precision, recall), weighting=weighting)


def read_annotations_csv(path: str | Path) -> dict[str, AnnotationTable]:
    """Parse the annotation CSV: model_id,topic_id,category,percent,n_samples,n_members."""
    path = Path(path)
    required = ["model_id", "topic_id", "category", "percent", "n_samples", "n_members"]
    collected: dict[str, dict[int, AnnotationRow]] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != required:
            raise ValueError(f"annotation CSV must have header {','.join(required)}")
        for lineno, rec in enumerate(reader, start=2):
            category = rec["category"].strip()
            if category not in CATEGORY_LABELS:
                raise ValueError(f"unknown category {category!r} at line {lineno}")
            model_id = rec["model_id"].strip()
            topic_id = int(rec["topic_id"])
            rows = collected.setdefault(model_id, {})
            row = rows.get(topic_id)
            if row is None:
                row = AnnotationRow(
                    topic_id=topic_id,
                    percentages={},
                    n_samples=int(rec["n_samples"]),
                    n_members=int(rec["n_members"]),
                )
                rows[topic_id] = row
            if category in row.percentages:
                raise ValueError(f"duplicate category {category!r} for topic {topic_id} at line {lineno}")
            row.percentages[category] = float(rec["percent"])

    tables = {}
    for model_id, rows in collected.items():
        table = AnnotationTable(model_id=model_id, rows=[rows[t] for t in sorted(rows)])
        table.validate()
        tables[model_id] = table
    return tables
