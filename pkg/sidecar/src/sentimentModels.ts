// Pinned lexicon-based sentiment scorers.
//
// Score convention: P(positive) - P(negative) in [-1, 1], computed as
// (pos - neg) / (pos + neg + 1) over matched evidence weights so the
// magnitude grows with the amount of sentiment-bearing language. A null
// score means the model produced no usable distribution: empty input for
// either model, and out-of-domain text (zero finance-term hits) for the
// finance model, mirroring how domain-specialized scorers go missing on
// unfamiliar content.

import { tokenize } from "./hashEmbedder.js";

interface WeightedTerm {
  term: string; // single token, or bigram joined with a space
  weight: number;
}

const GENERAL_POSITIVE: WeightedTerm[] = [
  { term: "thrilled", weight: 2 },
  { term: "delighted", weight: 2 },
  { term: "excellent", weight: 2 },
  { term: "exceptional", weight: 2 },
  { term: "outstanding", weight: 2 },
  { term: "fantastic", weight: 2 },
  { term: "great", weight: 1 },
  { term: "good", weight: 1 },
  { term: "strong", weight: 1 },
  { term: "positive", weight: 1 },
  { term: "pleased", weight: 1 },
  { term: "happy", weight: 1 },
  { term: "improved", weight: 1 },
  { term: "improving", weight: 1 },
  { term: "success", weight: 1 },
  { term: "successful", weight: 1 },
  { term: "confident", weight: 1 },
  { term: "optimistic", weight: 1 },
  { term: "favorable", weight: 1 },
  { term: "encouraging", weight: 1 },
];

const GENERAL_NEGATIVE: WeightedTerm[] = [
  { term: "terrible", weight: 2 },
  { term: "awful", weight: 2 },
  { term: "disastrous", weight: 2 },
  { term: "disappointed", weight: 2 },
  { term: "disappointing", weight: 2 },
  { term: "bad", weight: 1 },
  { term: "weak", weight: 1 },
  { term: "negative", weight: 1 },
  { term: "poor", weight: 1 },
  { term: "concerned", weight: 1 },
  { term: "worried", weight: 1 },
  { term: "difficult", weight: 1 },
  { term: "declined", weight: 1 },
  { term: "declining", weight: 1 },
  { term: "failed", weight: 1 },
  { term: "failure", weight: 1 },
  { term: "pessimistic", weight: 1 },
  { term: "unfavorable", weight: 1 },
  { term: "uncertain", weight: 1 },
  { term: "loss", weight: 1 },
];

const FINANCE_POSITIVE: WeightedTerm[] = [
  { term: "outperformed", weight: 2 },
  { term: "outperformance", weight: 2 },
  { term: "record high", weight: 2 },
  { term: "beat expectations", weight: 2 },
  { term: "raised guidance", weight: 2 },
  { term: "rally", weight: 1 },
  { term: "rallied", weight: 1 },
  { term: "gain", weight: 1 },
  { term: "gains", weight: 1 },
  { term: "gained", weight: 1 },
  { term: "profit", weight: 1 },
  { term: "profitable", weight: 1 },
  { term: "growth", weight: 1 },
  { term: "upside", weight: 1 },
  { term: "bullish", weight: 1 },
  { term: "alpha", weight: 1 },
  { term: "returned", weight: 1 },
  { term: "appreciation", weight: 1 },
];

const FINANCE_NEGATIVE: WeightedTerm[] = [
  { term: "underperformed", weight: 2 },
  { term: "underperformance", weight: 2 },
  { term: "missed expectations", weight: 2 },
  { term: "drawdown", weight: 2 },
  { term: "default", weight: 2 },
  { term: "writedown", weight: 2 },
  { term: "impairment", weight: 2 },
  { term: "selloff", weight: 1 },
  { term: "losses", weight: 1 },
  { term: "loss", weight: 1 },
  { term: "decline", weight: 1 },
  { term: "declined", weight: 1 },
  { term: "bearish", weight: 1 },
  { term: "downside", weight: 1 },
  { term: "volatility", weight: 1 },
  { term: "redemptions", weight: 1 },
  { term: "downgrade", weight: 1 },
];

function matchWeight(tokens: string[], lexicon: WeightedTerm[]): number {
  const unigrams = new Map<string, number>();
  for (const tok of tokens) {
    unigrams.set(tok, (unigrams.get(tok) ?? 0) + 1);
  }
  const bigrams = new Map<string, number>();
  for (let i = 0; i + 1 < tokens.length; i++) {
    const bg = `${tokens[i]} ${tokens[i + 1]}`;
    bigrams.set(bg, (bigrams.get(bg) ?? 0) + 1);
  }
  let total = 0;
  for (const { term, weight } of lexicon) {
    const count = term.includes(" ") ? bigrams.get(term) ?? 0 : unigrams.get(term) ?? 0;
    total += weight * count;
  }
  return total;
}

export interface SentimentModel {
  id: string;
  score(text: string): number | null;
}

function lexiconScore(pos: number, neg: number): number {
  return (pos - neg) / (pos + neg + 1);
}

export const GENERAL_MODEL: SentimentModel = {
  id: "lexicon-general-v1",
  score(text: string): number | null {
    const tokens = tokenize(text);
    if (tokens.length === 0) return null;
    const pos = matchWeight(tokens, GENERAL_POSITIVE);
    const neg = matchWeight(tokens, GENERAL_NEGATIVE);
    return lexiconScore(pos, neg);
  },
};

export const FINANCE_MODEL: SentimentModel = {
  id: "lexicon-finance-v1",
  score(text: string): number | null {
    const tokens = tokenize(text);
    if (tokens.length === 0) return null;
    const pos = matchWeight(tokens, FINANCE_POSITIVE);
    const neg = matchWeight(tokens, FINANCE_NEGATIVE);
    if (pos + neg === 0) return null; // out of domain for the finance model
    return lexiconScore(pos, neg);
  },
};

export const SENTIMENT_MODELS: Record<string, SentimentModel> = {
  general: GENERAL_MODEL,
  "lexicon-general-v1": GENERAL_MODEL,
  finance: FINANCE_MODEL,
  "lexicon-finance-v1": FINANCE_MODEL,
};

export const DEFAULT_SENTIMENT_MODEL = "general";
