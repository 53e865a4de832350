"""Model evaluation: coherence, annotation-based classification, stability."""

from fundlens.evalx.classify import (
    CATEGORY_LABELS,
    WEIGHTINGS,
    AnnotationRow,
    AnnotationTable,
    ClassMetrics,
    disclosure_prf,
    f1_from_pr,
    read_annotations_csv,
    topic_predicted_class,
)
from fundlens.evalx.coherence import (
    DEFAULT_CV_EPSILON,
    DEFAULT_CV_WINDOW,
    DEFAULT_TOP_N,
    DEFAULT_UMASS_EPSILON,
    CoherenceResult,
    coherence_cv,
    coherence_umass,
    npmi,
)
from fundlens.evalx.stability import (
    DEFAULT_NONZERO_FLOOR,
    StabilityMatrix,
    stability_matrix,
)

__all__ = [
    "CATEGORY_LABELS",
    "DEFAULT_CV_EPSILON",
    "DEFAULT_CV_WINDOW",
    "DEFAULT_NONZERO_FLOOR",
    "DEFAULT_TOP_N",
    "DEFAULT_UMASS_EPSILON",
    "WEIGHTINGS",
    "AnnotationRow",
    "AnnotationTable",
    "ClassMetrics",
    "CoherenceResult",
    "StabilityMatrix",
    "coherence_cv",
    "coherence_umass",
    "disclosure_prf",
    "npmi",
    "f1_from_pr",
    "read_annotations_csv",
    "stability_matrix",
    "topic_predicted_class",
]
