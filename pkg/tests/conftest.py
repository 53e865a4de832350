"""Shared synthetic fixtures for the sentiment-performance pipeline tests."""

import numpy as np

from fundlens.months import format_month
from fundlens.sentperf import FundReturn, TopicMonthSentiment

SIGNAL_SCALE = 0.5
SENTIMENT_SD = 0.3
NOISE_FRACTION = 0.1  # return noise sd = 0.1 * signal sd


def make_sentiment_panel(
    seed,
    n_funds=30,
    n_months=36,
    signal_topics=(0, 1),
    noise_topics=(2, 3),
    start_year=2020,
):
    """Panel where next-month returns are 0.5 * mean signal sentiment + small noise.

    Noise topics get sentiment series independent of returns. Returns the
    (sentiments, returns, signal_topics, noise_topics) tuple.
    """
    rng = np.random.default_rng(seed)
    topics = list(signal_topics) + list(noise_topics)
    months = [format_month(start_year + i // 12, i % 12 + 1) for i in range(n_months + 1)]

    sentiments: list[TopicMonthSentiment] = []
    returns: list[FundReturn] = []
    signal_sd = SIGNAL_SCALE * SENTIMENT_SD
    for f in range(n_funds):
        fund_id = f"fund{f:02d}"
        for m in range(n_months):
            scores = {t: float(np.clip(rng.normal(0.0, SENTIMENT_SD), -1, 1)) for t in topics}
            for t in topics:
                sentiments.append(
                    TopicMonthSentiment(fund_id=fund_id, topic=t, month=months[m],
                                        mean_score=scores[t], n_chunks=3)
                )
            composite = float(np.mean([scores[t] for t in signal_topics]))
            ret = SIGNAL_SCALE * composite + float(rng.normal(0.0, NOISE_FRACTION * signal_sd))
            returns.append(FundReturn(fund_id=fund_id, month=months[m + 1], ret=ret))
    return sentiments, returns, tuple(signal_topics), tuple(noise_topics)
