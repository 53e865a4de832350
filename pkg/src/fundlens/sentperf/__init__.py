"""Sentiment x topic x fund analytics against next-month returns."""

from fundlens.sentperf.pipeline import (
    DEFAULT_SIGNIFICANCE,
    FundReturn,
    SentimentRecord,
    TopicCorrelationSummary,
    TopicMonthSentiment,
    aggregate_sentiment,
    fund_topic_correlations,
    lag_join,
    read_returns_csv,
    read_sentiment_jsonl,
    summarize_topics,
    write_sentiment_jsonl,
)
from fundlens.sentperf.stats import (
    DEFAULT_N_MIN,
    TTestResult,
    boxplot_stats,
    pearson_r,
    regularized_incomplete_beta,
    student_t_two_sided_p,
    t_test_one_sample,
)

__all__ = [
    "DEFAULT_N_MIN",
    "DEFAULT_SIGNIFICANCE",
    "FundReturn",
    "SentimentRecord",
    "TTestResult",
    "TopicCorrelationSummary",
    "TopicMonthSentiment",
    "aggregate_sentiment",
    "boxplot_stats",
    "fund_topic_correlations",
    "lag_join",
    "pearson_r",
    "read_returns_csv",
    "read_sentiment_jsonl",
    "regularized_incomplete_beta",
    "student_t_two_sided_p",
    "summarize_topics",
    "t_test_one_sample",
    "write_sentiment_jsonl",
]
