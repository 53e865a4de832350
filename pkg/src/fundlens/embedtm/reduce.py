"""Dimensionality reduction behind a pluggable fit/transform contract.

The default backend is PCA with a deterministic sign convention: each
component is flipped so its largest-magnitude loading is positive. Word
vectors must pass through the same fitted transform as chunk vectors, so
the reducer object is reusable across sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fundlens.embedtm.embeddings import EmbeddingSet

REDUCE_METHODS = ("none", "pca")


@dataclass
class DimensionReducer:
    method: str
    d_target: int
    input_dim: int
    mean: np.ndarray | None = None
    components: np.ndarray | None = None  # (d_target, input_dim)

    def transform(self, emb: EmbeddingSet) -> EmbeddingSet:
        if emb.dim != self.input_dim:
            raise ValueError(f"reducer fitted on dim {self.input_dim}, got {emb.dim}")
        if self.method == "none":
            return EmbeddingSet(
                dim=emb.dim, kind=emb.kind, ids=list(emb.ids), matrix=emb.matrix.copy(), model_id=emb.model_id
            )
        projected = (emb.matrix - self.mean) @ self.components.T
        return EmbeddingSet(
            dim=self.d_target, kind=emb.kind, ids=list(emb.ids), matrix=projected, model_id=emb.model_id
        )


def fit_reducer(emb: EmbeddingSet, d_target: int, method: str = "pca") -> DimensionReducer:
    if method not in REDUCE_METHODS:
        raise ValueError(f"unknown reduction method {method!r}")
    if not 1 <= d_target <= emb.dim:
        raise ValueError(f"d_target must be in [1, {emb.dim}], got {d_target}")
    if method == "none":
        return DimensionReducer(method="none", d_target=emb.dim, input_dim=emb.dim)
    if len(emb) == 0:
        raise ValueError("cannot fit PCA on an empty embedding set")

    mean = emb.matrix.mean(axis=0)
    centered = emb.matrix - mean
    # SVD of the centered data; right singular vectors are the components.
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:d_target].copy()
    if components.shape[0] < d_target:
        # fewer samples than requested components: pad with zero rows
        pad = np.zeros((d_target - components.shape[0], emb.dim))
        components = np.vstack([components, pad])
    for row in components:
        pivot = int(np.argmax(np.abs(row)))
        if row[pivot] < 0:
            row *= -1.0
    return DimensionReducer(
        method="pca", d_target=d_target, input_dim=emb.dim, mean=mean, components=components
    )


def reduce_dimensions(emb: EmbeddingSet, d_target: int, method: str = "pca") -> EmbeddingSet:
    """Fit on ``emb`` and project it; use :func:`fit_reducer` to share a fit."""
    return fit_reducer(emb, d_target, method).transform(emb)
