"""Report table builders and figure payloads.

Three tabular schemas mirror the analysis outputs: topic-size statistics
per model, classification + coherence metrics per model, and per-topic
correlation summaries. Figure-ready payloads (stability heatmap, boxplot
five-number summaries) are always JSON.
"""

from __future__ import annotations

from fundlens.sentperf.pipeline import TopicCorrelationSummary
from fundlens.sentperf.stats import boxplot_stats

TOPIC_SIZES_HEADER = [
    "model", "n_topics", "outliers",
    "max_n_docs", "median_n_docs", "mean_n_docs", "min_n_docs",
]
METRICS_HEADER = ["model", "precision", "recall", "f1", "c_v", "c_umass"]
SUMMARY_HEADER = [
    "model", "topic_id", "annotation", "count", "mean", "std", "p_value", "significant",
]


def topic_sizes_rows(stats_payloads: list[dict]) -> list[list]:
    return [
        [p.get("model"), p.get("n_topics"), p.get("outliers"), p.get("max_n_docs"),
         p.get("median_n_docs"), p.get("mean_n_docs"), p.get("min_n_docs")]
        for p in stats_payloads
    ]


def metrics_rows(classify: dict[str, dict], coherence: dict[str, dict]) -> list[list]:
    """One metrics row per model; missing sides stay blank (outer join)."""
    rows = []
    for model_id in sorted(set(classify) | set(coherence)):
        cm = classify.get(model_id, {})
        co = coherence.get(model_id, {})
        rows.append(
            [
                model_id,
                cm.get("precision"),
                cm.get("recall"),
                cm.get("f1"),
                co.get("c_v", {}).get("aggregate"),
                co.get("c_umass", {}).get("aggregate"),
            ]
        )
    return rows


def summary_rows(model_id: str, summaries: list[TopicCorrelationSummary]) -> list[list]:
    return [
        [
            model_id, s.topic, s.annotation, s.count, s.mean, s.std,
            s.p_value, s.significant,
        ]
        for s in summaries
    ]


def boxplot_payload(
    model_id: str,
    correlations_by_topic: dict[int, list[float]],
    summaries: list[TopicCorrelationSummary],
) -> dict:
    """Per-topic five-number summaries plus flags for plotting."""
    by_topic = {s.topic: s for s in summaries}
    topics = []
    for topic in sorted(correlations_by_topic):
        values = correlations_by_topic[topic]
        if not values:
            continue
        mn, q25, median, q75, mx = boxplot_stats(values)
        summary = by_topic.get(topic)
        annotation = summary.annotation if summary else None
        topics.append(
            {
                "topic": topic,
                "count": len(values),
                "min": mn,
                "q25": q25,
                "median": median,
                "q75": q75,
                "max": mx,
                "significant": bool(summary.significant) if summary else False,
                "non_disclosure": annotation is not None and annotation != "Disclosure",
                "annotation": annotation,
            }
        )
    return {"model": model_id, "topics": topics}
