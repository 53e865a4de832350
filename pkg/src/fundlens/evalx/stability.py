"""Cross-model assignment stability as a contingency matrix.

Counts how chunks co-assign between two models' topics; outlier-labeled
chunks are excluded on either side. The row-normalized view and the share
of cells at or above a normalized floor quantify how concentrated the
mapping is (a diagonal matrix means perfectly stable assignments).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fundlens.lda import OUTLIER, TopicAssignment

DEFAULT_NONZERO_FLOOR = 0.05
DEFAULT_TOP_ROWS = 20
DEFAULT_TOP_COLS = 20


@dataclass
class StabilityMatrix:
    row_labels: list[int]  # topic ids of model A, ascending
    col_labels: list[int]  # topic ids of model B, ascending
    counts: np.ndarray  # (rows, cols) co-assignment counts
    nonzero_fraction: float
    floor: float
    top_rows: list[int]  # display selection, descending size
    top_cols: list[int]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def row_normalized(self) -> np.ndarray:
        sums = self.counts.sum(axis=1, keepdims=True)
        out = np.zeros_like(self.counts, dtype=float)
        np.divide(self.counts, sums, out=out, where=sums > 0)
        return out

    def to_heatmap_payload(self) -> dict:
        row_idx = {t: i for i, t in enumerate(self.row_labels)}
        col_idx = {t: i for i, t in enumerate(self.col_labels)}
        normalized = self.row_normalized()
        values = [
            [float(normalized[row_idx[r], col_idx[c]]) for c in self.top_cols]
            for r in self.top_rows
        ]
        return {
            "row_labels": list(self.top_rows),
            "col_labels": list(self.top_cols),
            "values": values,
            "nonzero_fraction": self.nonzero_fraction,
            "floor": self.floor,
        }


def _topic_sizes(assignments: Sequence[TopicAssignment]) -> dict[int, int]:
    sizes: dict[int, int] = {}
    for a in assignments:
        if a.topic != OUTLIER:
            sizes[a.topic] = sizes.get(a.topic, 0) + 1
    return sizes


def stability_matrix(
    assignments_a: Sequence[TopicAssignment],
    assignments_b: Sequence[TopicAssignment],
    top_rows: int = DEFAULT_TOP_ROWS,
    top_cols: int = DEFAULT_TOP_COLS,
    floor: float = DEFAULT_NONZERO_FLOOR,
) -> StabilityMatrix:
    """Contingency of topic assignments between two models on shared chunks."""
    map_a = {a.chunk_id: a.topic for a in assignments_a}
    map_b = {b.chunk_id: b.topic for b in assignments_b}
    if len(map_a) != len(assignments_a) or len(map_b) != len(assignments_b):
        raise ValueError("duplicate chunk ids in assignments")
    if set(map_a) != set(map_b):
        missing = sorted(set(map_a) ^ set(map_b))[:5]
        raise ValueError(f"assignment chunk ids differ between models (e.g. {missing})")

    sizes_a = _topic_sizes(assignments_a)
    sizes_b = _topic_sizes(assignments_b)
    row_labels = sorted(sizes_a)
    col_labels = sorted(sizes_b)
    row_idx = {t: i for i, t in enumerate(row_labels)}
    col_idx = {t: i for i, t in enumerate(col_labels)}

    counts = np.zeros((len(row_labels), len(col_labels)), dtype=np.int64)
    for cid, topic_a in map_a.items():
        topic_b = map_b[cid]
        if topic_a == OUTLIER or topic_b == OUTLIER:
            continue
        counts[row_idx[topic_a], col_idx[topic_b]] += 1

    if counts.size:
        normalized = np.zeros_like(counts, dtype=float)
        sums = counts.sum(axis=1, keepdims=True)
        np.divide(counts, sums, out=normalized, where=sums > 0)
        nonzero_fraction = float((normalized >= floor).sum() / counts.size)
    else:
        nonzero_fraction = 0.0

    by_size_a = sorted(sizes_a, key=lambda t: (-sizes_a[t], t))[:top_rows]
    by_size_b = sorted(sizes_b, key=lambda t: (-sizes_b[t], t))[:top_cols]
    return StabilityMatrix(
        row_labels=row_labels,
        col_labels=col_labels,
        counts=counts,
        nonzero_fraction=nonzero_fraction,
        floor=floor,
        top_rows=by_size_a,
        top_cols=by_size_b,
    )
