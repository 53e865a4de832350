"""Command-line pipeline orchestration.

Subcommands run one stage each over a shared output directory; every run
validates its inputs, writes byte-stable artifacts, and finishes with a
manifest recording input/output digests. Exit codes: 0 success, 2 input or
validation error, 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from fundlens import OUTLIER, __version__
from fundlens.cli.config import DEFAULTS, PipelineConfig, print_defaults
from fundlens.cli.io import (
    cluster_assignments,
    noise_count,
    read_assignments_jsonl,
    read_tokens_jsonl,
    write_assignments_jsonl,
    write_csv,
    write_json,
    write_tokens_jsonl,
)
from fundlens.cli.manifest import OutputLock, RunManifest
from fundlens.cli.reports import (
    METRICS_HEADER,
    SUMMARY_HEADER,
    TOPIC_SIZES_HEADER,
    boxplot_payload,
    metrics_rows,
    summary_rows,
    topic_sizes_rows,
)
from fundlens.corpus import (
    chunk_documents,
    ingest_documents,
    load_stopwords,
    normalize_for_lda,
    read_chunks_jsonl,
    write_chunks_jsonl,
)
from fundlens.corpus.vocabulary import build_vocabulary
from fundlens.embedtm import (
    TopicSizeStats,
    centroid_topic_words,
    cluster_embeddings,
    ctfidf_mmr_words,
    finalize_mode,
    fit_reducer,
    hierarchical_reduce,
    load_cluster_model,
    load_embeddings,
    save_cluster_model,
    topic_size_stats,
)
from fundlens.evalx import (
    coherence_cv,
    coherence_umass,
    disclosure_prf,
    read_annotations_csv,
    stability_matrix,
    topic_predicted_class,
)
from fundlens.lda import LdaConfig, assign_chunks, fit_lda, load_model, save_model, top_words
from fundlens.sentperf import (
    TopicMonthSentiment,
    aggregate_sentiment,
    fund_topic_correlations,
    lag_join,
    read_returns_csv,
    read_sentiment_jsonl,
    summarize_topics,
)

SUBCOMMANDS = (
    "ingest", "chunk", "normalize", "lda-fit", "embed-load", "cluster",
    "reduce-topics", "topics", "coherence", "classify-eval", "stability",
    "senti-aggregate", "correlate", "report", "config",
)


def _emit(cfg: PipelineConfig, manifest: RunManifest, path: Path) -> Path:
    manifest.add_output(path, cfg.output_dir)
    return path


def cmd_ingest(cfg: PipelineConfig, manifest: RunManifest) -> None:
    src = cfg.input_path("documents")
    manifest.add_input(src)
    corpus_cfg = cfg.section("corpus")
    docs = ingest_documents(src, date_min=corpus_cfg["date_min"], date_max=corpus_cfg["date_max"])
    out = cfg.artifact("documents.jsonl")
    with out.open("w", encoding="utf-8") as fh:
        for d in docs:
            fh.write(
                json.dumps(
                    {
                        "doc_id": d.doc_id, "manager_id": d.manager_id, "fund_id": d.fund_id,
                        "doc_type": d.doc_type, "date": d.date, "blocks": d.blocks,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    _emit(cfg, manifest, out)
    print(f"ingested {len(docs)} documents -> {out}")


def cmd_chunk(cfg: PipelineConfig, manifest: RunManifest) -> None:
    src = cfg.require_artifact("documents.jsonl", "ingest")
    manifest.add_input(src)
    corpus_cfg = cfg.section("corpus")
    docs = ingest_documents(src, date_min=corpus_cfg["date_min"], date_max=corpus_cfg["date_max"])
    stopwords = load_stopwords(corpus_cfg["stopword_path"])
    chunks = chunk_documents(
        docs,
        stopwords,
        language_threshold=corpus_cfg["language_threshold"],
        max_len=corpus_cfg["max_len"],
        overlap=corpus_cfg["overlap"],
        min_len=corpus_cfg["min_len"],
    )
    out = cfg.artifact("chunks.jsonl")
    write_chunks_jsonl(chunks, out)
    _emit(cfg, manifest, out)
    print(f"wrote {len(chunks)} chunks -> {out}")


def cmd_normalize(cfg: PipelineConfig, manifest: RunManifest) -> None:
    src = cfg.require_artifact("chunks.jsonl", "chunk")
    manifest.add_input(src)
    corpus_cfg = cfg.section("corpus")
    stopwords = load_stopwords(corpus_cfg["stopword_path"])
    chunks = read_chunks_jsonl(src)
    token_lists = [
        normalize_for_lda(c.raw_text, stopwords, min_word_len=corpus_cfg["min_word_len"])
        for c in chunks
    ]
    out = cfg.artifact("tokens.jsonl")
    write_tokens_jsonl(out, [c.chunk_id for c in chunks], token_lists)
    _emit(cfg, manifest, out)
    print(f"normalized {len(chunks)} chunks -> {out}")


def _lda_topic_stats(k: int, assignments) -> TopicSizeStats:
    sizes = [0] * k
    outliers = 0
    for a in assignments:
        if a.topic == OUTLIER:
            outliers += 1
        else:
            sizes[a.topic] += 1
    arr = np.array(sizes)
    return TopicSizeStats(
        n_topics=k,
        n_outliers=outliers,
        max_members=int(arr.max()),
        median_members=float(np.median(arr)),
        mean_members=float(arr.mean()),
        min_members=int(arr.min()),
    )


def _stats_payload(model_id: str, stats: TopicSizeStats) -> dict:
    return {
        "model": model_id,
        "n_topics": stats.n_topics,
        "outliers": stats.n_outliers,
        "max_n_docs": stats.max_members,
        "median_n_docs": stats.median_members,
        "mean_n_docs": stats.mean_members,
        "min_n_docs": stats.min_members,
    }


def cmd_lda_fit(cfg: PipelineConfig, manifest: RunManifest) -> None:
    src = cfg.require_artifact("tokens.jsonl", "normalize")
    manifest.add_input(src)
    corpus_cfg = cfg.section("corpus")
    lda_cfg = cfg.section("lda")
    chunk_ids, token_lists = read_tokens_jsonl(src)
    kept = [(cid, toks) for cid, toks in zip(chunk_ids, token_lists) if toks]
    dropped = len(chunk_ids) - len(kept)
    if dropped:
        warnings.warn(f"dropping {dropped} chunks with no tokens before fitting")
    corpus = build_vocabulary(
        [toks for _, toks in kept],
        min_doc_freq=corpus_cfg["min_doc_freq"],
        ngram_order=corpus_cfg["ngram_order"],
        chunk_ids=[cid for cid, _ in kept],
    )
    # min_doc_freq can empty some chunks; the sampler requires tokens
    nonempty = [i for i, doc in enumerate(corpus.encoded) if doc]
    if len(nonempty) < len(corpus.encoded):
        warnings.warn(f"dropping {len(corpus.encoded) - len(nonempty)} chunks emptied by min_doc_freq")
        corpus.encoded = [corpus.encoded[i] for i in nonempty]
        corpus.chunk_ids = [corpus.chunk_ids[i] for i in nonempty]
    config = LdaConfig(
        k=lda_cfg["k"], alpha=lda_cfg["alpha"], beta=lda_cfg["beta"],
        iterations=lda_cfg["iterations"], burn_in=lda_cfg["burn_in"],
        seed=cfg.seed, tau=lda_cfg["tau"],
    )
    model = fit_lda(corpus, config)
    out_model = cfg.artifact("lda_model.fltm")
    save_model(model, out_model)
    assignments = assign_chunks(model)
    out_assign = cfg.artifact("lda_assignments.jsonl")
    write_assignments_jsonl(out_assign, assignments)
    out_loglik = cfg.artifact("lda_loglik.csv")
    write_csv(out_loglik, ["sweep", "log_likelihood"],
              [[i + 1, ll] for i, ll in enumerate(model.log_likelihood)])
    out_stats = cfg.artifact("lda_topic_stats.json")
    write_json(out_stats, _stats_payload("lda", _lda_topic_stats(model.k, assignments)))
    for path in (out_model, out_assign, out_loglik, out_stats):
        _emit(cfg, manifest, path)
    print(f"fitted k={model.k} on {len(corpus.encoded)} chunks -> {out_model}")


def cmd_topics(cfg: PipelineConfig, manifest: RunManifest) -> None:
    src = cfg.require_artifact("lda_model.fltm", "lda-fit")
    manifest.add_input(src)
    model = load_model(src)
    assignments = assign_chunks(model)
    counts = [0] * model.k
    outliers = 0
    for a in assignments:
        if a.topic == OUTLIER:
            outliers += 1
        else:
            counts[a.topic] += 1
    n = cfg.section("lda")["top_words"]
    rows = []
    for topic in range(model.k):
        words = " ".join(term for term, _ in top_words(model, topic, n))
        rows.append([topic, counts[topic], words])
        print(f"topic {topic:>3}  {counts[topic]:>8} chunks  {words}")
    if outliers:
        print(f"outliers     {outliers:>8} chunks")
    out = cfg.artifact("lda_topics.csv")
    write_csv(out, ["topic_id", "n_chunks", "top_words"], rows)
    _emit(cfg, manifest, out)


def cmd_embed_load(cfg: PipelineConfig, manifest: RunManifest) -> None:
    chunk_path = cfg.input_path("embeddings_chunks")
    manifest.add_input(chunk_path)
    chunk_set = load_embeddings(chunk_path, expected_kind="chunk")
    summary = {
        "chunks": {"count": len(chunk_set), "dim": chunk_set.dim, "model": chunk_set.model_id},
        "words": None,
    }
    word_path = cfg.optional_path("embeddings_words")
    if word_path is not None:
        manifest.add_input(word_path)
        word_set = load_embeddings(word_path, expected_kind="word")
        summary["words"] = {"count": len(word_set), "dim": word_set.dim, "model": word_set.model_id}
    out = cfg.artifact("embeddings_summary.json")
    write_json(out, summary)
    _emit(cfg, manifest, out)
    print(f"validated embeddings -> {out}")


def cmd_cluster(cfg: PipelineConfig, manifest: RunManifest) -> None:
    et = cfg.section("embedtm")
    chunk_path = cfg.input_path("embeddings_chunks")
    manifest.add_input(chunk_path)
    chunk_set = load_embeddings(chunk_path, expected_kind="chunk")

    reducer = fit_reducer(chunk_set, d_target=et["d_target"], method=et["reduce_method"])
    reduced = reducer.transform(chunk_set)
    model = cluster_embeddings(
        reduced, min_topic_size=et["min_topic_size"], linkage_threshold=et["linkage_threshold"]
    )
    model = finalize_mode(model, et["mode"])

    words_reduced = None
    word_path = cfg.optional_path("embeddings_words")
    if word_path is not None:
        manifest.add_input(word_path)
        words_reduced = reducer.transform(load_embeddings(word_path, expected_kind="word"))

    topic_words: dict = {"centroid_proximity": None, "ctfidf_mmr": None}
    if words_reduced is not None and model.n_topics > 0:
        reps = centroid_topic_words(model, words_reduced, n=et["top_words"])
        topic_words["centroid_proximity"] = [
            {"topic": r.topic, "terms": [[t, s] for t, s in r.terms]} for r in reps
        ]
    tokens_path = cfg.artifact("tokens.jsonl")
    if tokens_path.exists() and model.n_topics > 0:
        manifest.add_input(tokens_path)
        chunk_ids, token_lists = read_tokens_jsonl(tokens_path)
        corpus = build_vocabulary(token_lists, min_doc_freq=1, chunk_ids=chunk_ids)
        reps = ctfidf_mmr_words(
            model, corpus, n=et["top_words"], lam=et["mmr_lambda"], word_embeddings=words_reduced
        )
        topic_words["ctfidf_mmr"] = [
            {"topic": r.topic, "terms": [[t, s] for t, s in r.terms]} for r in reps
        ]

    out_model = cfg.artifact("cluster_model.json")
    save_cluster_model(model, out_model)
    out_assign = cfg.artifact("cluster_assignments.jsonl")
    write_assignments_jsonl(out_assign, cluster_assignments(model))
    out_words = cfg.artifact("cluster_topic_words.json")
    write_json(out_words, topic_words)
    out_stats = cfg.artifact("cluster_topic_stats.json")
    if model.n_topics > 0:
        stats_payload = _stats_payload(f"cluster_{model.mode}", topic_size_stats(model))
    else:
        stats_payload = {"model": f"cluster_{model.mode}", "n_topics": 0,
                         "outliers": noise_count(model)}
    write_json(out_stats, stats_payload)
    for path in (out_model, out_assign, out_words, out_stats):
        _emit(cfg, manifest, path)
    print(f"clustered {len(chunk_set)} chunks into {model.n_topics} topics -> {out_model}")


def cmd_reduce_topics(cfg: PipelineConfig, manifest: RunManifest) -> None:
    et = cfg.section("embedtm")
    if et["target_k"] is None:
        raise ValueError("embedtm.target_k must be set for reduce-topics")
    src = cfg.require_artifact("cluster_model.json", "cluster")
    manifest.add_input(src)
    model = load_cluster_model(src)
    reduced = hierarchical_reduce(model, int(et["target_k"]))
    out_model = cfg.artifact("cluster_model_reduced.json")
    save_cluster_model(reduced, out_model)
    out_assign = cfg.artifact("cluster_assignments_reduced.jsonl")
    write_assignments_jsonl(out_assign, cluster_assignments(reduced))
    out_stats = cfg.artifact("cluster_topic_stats_reduced.json")
    write_json(out_stats, _stats_payload(f"cluster_{reduced.mode}_k{reduced.n_topics}", topic_size_stats(reduced)))
    for path in (out_model, out_assign, out_stats):
        _emit(cfg, manifest, path)
    print(f"reduced to {reduced.n_topics} topics -> {out_model}")


def _collect_topic_word_sets(cfg: PipelineConfig, manifest: RunManifest, top_n: int) -> dict[str, list[list[str]]]:
    """Topic word lists per available model artifact."""
    sets: dict[str, list[list[str]]] = {}
    lda_path = cfg.artifact("lda_model.fltm")
    if lda_path.exists():
        manifest.add_input(lda_path)
        model = load_model(lda_path)
        sets["lda"] = [[t for t, _ in top_words(model, k, top_n)] for k in range(model.k)]
    words_path = cfg.artifact("cluster_topic_words.json")
    if words_path.exists():
        manifest.add_input(words_path)
        payload = json.loads(words_path.read_text(encoding="utf-8"))
        for key, model_id in (("centroid_proximity", "cluster_centroid"), ("ctfidf_mmr", "cluster_ctfidf")):
            reps = payload.get(key)
            if reps:
                sets[model_id] = [[t for t, _ in rep["terms"]][:top_n] for rep in reps]
    if not sets:
        raise FileNotFoundError(
            "missing upstream artifact lda_model.fltm or cluster_topic_words.json "
            "(run `fundlens lda-fit` or `fundlens cluster` first)"
        )
    return sets


def cmd_coherence(cfg: PipelineConfig, manifest: RunManifest) -> None:
    ev = cfg.section("eval")
    tokens_path = cfg.require_artifact("tokens.jsonl", "normalize")
    manifest.add_input(tokens_path)
    chunk_ids, token_lists = read_tokens_jsonl(tokens_path)
    nonempty = [toks for toks in token_lists if toks]
    corpus = build_vocabulary(nonempty, min_doc_freq=1)
    word_sets = _collect_topic_word_sets(cfg, manifest, ev["top_n"])

    results: dict[str, dict] = {}
    rows: list[list] = []
    for model_id in sorted(word_sets):
        topics = word_sets[model_id]
        umass = coherence_umass(topics, corpus, top_n=ev["top_n"], epsilon=ev["umass_epsilon"])
        cv = coherence_cv(topics, nonempty, top_n=ev["top_n"], window=ev["window"], epsilon=ev["cv_epsilon"])
        results[model_id] = {
            "c_umass": {"aggregate": umass.aggregate, "per_topic": umass.per_topic, "params": umass.params},
            "c_v": {"aggregate": cv.aggregate, "per_topic": cv.per_topic, "params": cv.params},
        }
        for metric, res in (("c_umass", umass), ("c_v", cv)):
            rows.append([model_id, metric, "aggregate", res.aggregate])
            rows.extend([model_id, metric, str(i), s] for i, s in enumerate(res.per_topic))

    out_csv = cfg.artifact("coherence.csv")
    write_csv(out_csv, ["model", "metric", "scope", "score"], rows)
    out_json = cfg.artifact("coherence.json")
    write_json(out_json, results)
    for path in (out_csv, out_json):
        _emit(cfg, manifest, path)
    print(f"coherence for {', '.join(sorted(word_sets))} -> {out_csv}")


def cmd_classify_eval(cfg: PipelineConfig, manifest: RunManifest) -> None:
    ev = cfg.section("eval")
    src = cfg.input_path("annotations")
    manifest.add_input(src)
    tables = read_annotations_csv(src)
    pred_rows: list[list] = []
    metric_rows: list[list] = []
    payload: dict = {}
    for model_id in sorted(tables):
        table = tables[model_id]
        for row in table.rows:
            category, accuracy = topic_predicted_class(row)
            pred_rows.append([model_id, row.topic_id, category, accuracy])
        metrics = disclosure_prf(table, weighting=ev["weighting"])
        metric_rows.append([model_id, ev["weighting"], metrics.precision, metrics.recall, metrics.f1])
        payload[model_id] = {
            "weighting": ev["weighting"],
            "precision": metrics.precision,
            "recall": metrics.recall,
            "f1": metrics.f1,
        }
    out_pred = cfg.artifact("predicted_classes.csv")
    write_csv(out_pred, ["model", "topic_id", "predicted_class", "accuracy"], pred_rows)
    out_csv = cfg.artifact("classify_metrics.csv")
    write_csv(out_csv, ["model", "weighting", "precision", "recall", "f1"], metric_rows)
    out_json = cfg.artifact("classify_metrics.json")
    write_json(out_json, payload)
    for path in (out_pred, out_csv, out_json):
        _emit(cfg, manifest, path)
    print(f"classification metrics for {len(tables)} models -> {out_csv}")


def cmd_stability(cfg: PipelineConfig, manifest: RunManifest) -> None:
    ev = cfg.section("eval")
    path_a = cfg.input_path("assignments_a")
    path_b = cfg.input_path("assignments_b")
    manifest.add_input(path_a)
    manifest.add_input(path_b)
    result = stability_matrix(
        read_assignments_jsonl(path_a),
        read_assignments_jsonl(path_b),
        top_rows=ev["top_rows"],
        top_cols=ev["top_cols"],
        floor=ev["nonzero_floor"],
    )
    out_csv = cfg.artifact("stability.csv")
    header = ["topic_a\\topic_b"] + [str(c) for c in result.col_labels]
    rows = [
        [str(r)] + [int(result.counts[i, j]) for j in range(len(result.col_labels))]
        for i, r in enumerate(result.row_labels)
    ]
    write_csv(out_csv, header, rows)
    out_json = cfg.artifact("stability_heatmap.json")
    write_json(out_json, result.to_heatmap_payload())
    for path in (out_csv, out_json):
        _emit(cfg, manifest, path)
    print(f"stability over {result.total} co-assigned chunks -> {out_csv}")


def cmd_senti_aggregate(cfg: PipelineConfig, manifest: RunManifest) -> None:
    senti_path = cfg.input_path("sentiment")
    manifest.add_input(senti_path)
    records = read_sentiment_jsonl(senti_path)
    chunks_path = cfg.require_artifact("chunks.jsonl", "chunk")
    manifest.add_input(chunks_path)
    chunks = read_chunks_jsonl(chunks_path)
    assign_path = cfg.optional_path("assignments")
    if assign_path is None:
        assign_path = cfg.require_artifact("lda_assignments.jsonl", "lda-fit")
    manifest.add_input(assign_path)
    assignments = read_assignments_jsonl(assign_path)

    rows: list[list] = []
    for model_id in sorted({r.model_id for r in records}):
        for tms in aggregate_sentiment(records, assignments, chunks, model_id=model_id):
            rows.append([model_id, tms.fund_id, tms.topic, tms.month, tms.mean_score, tms.n_chunks])
    out = cfg.artifact("topic_month_sentiment.csv")
    write_csv(out, ["model", "fund_id", "topic", "month", "mean_score", "n_chunks"], rows)
    _emit(cfg, manifest, out)
    print(f"aggregated {len(rows)} fund x topic x month records -> {out}")


def _read_topic_month_csv(path: Path) -> dict[str, list[TopicMonthSentiment]]:
    by_model: dict[str, list[TopicMonthSentiment]] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        for rec in csv.DictReader(fh):
            by_model.setdefault(rec["model"], []).append(
                TopicMonthSentiment(
                    fund_id=rec["fund_id"],
                    topic=int(rec["topic"]),
                    month=rec["month"],
                    mean_score=float(rec["mean_score"]),
                    n_chunks=int(rec["n_chunks"]),
                )
            )
    return by_model


def _annotation_labels(cfg: PipelineConfig, manifest: RunManifest) -> dict[int, str] | None:
    path = cfg.optional_path("annotations")
    if path is None:
        return None
    manifest.add_input(path)
    tables = read_annotations_csv(path)
    if len(tables) != 1:
        return None  # ambiguous which topic model the labels describe
    [table] = tables.values()
    return {row.topic_id: topic_predicted_class(row)[0] for row in table.rows}


def cmd_correlate(cfg: PipelineConfig, manifest: RunManifest) -> None:
    sp = cfg.section("sentperf")
    tms_path = cfg.require_artifact("topic_month_sentiment.csv", "senti-aggregate")
    manifest.add_input(tms_path)
    by_model = _read_topic_month_csv(tms_path)
    returns_path = cfg.input_path("returns")
    manifest.add_input(returns_path)
    returns = read_returns_csv(returns_path)
    annotations = _annotation_labels(cfg, manifest)

    corr_rows: list[list] = []
    sum_rows: list[list] = []
    box: dict[str, dict] = {}
    for model_id in sorted(by_model):
        paired = lag_join(by_model[model_id], returns)
        correlations = fund_topic_correlations(paired, n_min=sp["n_min"])
        for topic in sorted(correlations):
            for fund_id, r in correlations[topic]:
                corr_rows.append([model_id, fund_id, topic, r, len(paired[(fund_id, topic)])])
        by_topic = {t: [r for _, r in pairs] for t, pairs in correlations.items()}
        summaries = summarize_topics(by_topic, significance=sp["significance"], annotations=annotations)
        sum_rows.extend(summary_rows(model_id, summaries))
        box[model_id] = boxplot_payload(model_id, by_topic, summaries)

    out_corr = cfg.artifact("fund_correlations.csv")
    write_csv(out_corr, ["model", "fund_id", "topic", "r", "n_pairs"], corr_rows)
    out_sum = cfg.artifact("summary.csv")
    write_csv(out_sum, SUMMARY_HEADER, sum_rows)
    out_box = cfg.artifact("boxplot_payload.json")
    write_json(out_box, box)
    for path in (out_corr, out_sum, out_box):
        _emit(cfg, manifest, path)
    print(f"correlation summaries for {len(by_model)} sentiment models -> {out_sum}")


def cmd_report(cfg: PipelineConfig, manifest: RunManifest) -> None:
    fmt = cfg.fmt
    stats_payloads = []
    for name in ("lda_topic_stats.json", "cluster_topic_stats.json", "cluster_topic_stats_reduced.json"):
        path = cfg.artifact(name)
        if path.exists():
            manifest.add_input(path)
            stats_payloads.append(json.loads(path.read_text(encoding="utf-8")))
    if not stats_payloads:
        raise FileNotFoundError(
            "missing upstream artifact lda_topic_stats.json or cluster_topic_stats.json"
        )
    classify_path = cfg.require_artifact("classify_metrics.json", "classify-eval")
    coherence_path = cfg.require_artifact("coherence.json", "coherence")
    summary_path = cfg.require_artifact("summary.csv", "correlate")
    stability_path = cfg.require_artifact("stability_heatmap.json", "stability")
    box_path = cfg.require_artifact("boxplot_payload.json", "correlate")
    for path in (classify_path, coherence_path, summary_path, stability_path, box_path):
        manifest.add_input(path)

    classify = json.loads(classify_path.read_text(encoding="utf-8"))
    coherence = json.loads(coherence_path.read_text(encoding="utf-8"))
    size_rows = topic_sizes_rows(stats_payloads)
    met_rows = metrics_rows(classify, coherence)
    with summary_path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        summary_header = next(reader)
        summary_data = list(reader)

    outputs = []
    if fmt == "csv":
        out_sizes = cfg.artifact("report_topic_sizes.csv")
        write_csv(out_sizes, TOPIC_SIZES_HEADER, size_rows)
        out_metrics = cfg.artifact("report_metrics.csv")
        write_csv(out_metrics, METRICS_HEADER, met_rows)
        out_summary = cfg.artifact("report_correlations.csv")
        write_csv(out_summary, summary_header, summary_data)
        outputs += [out_sizes, out_metrics, out_summary]
    else:
        out_sizes = cfg.artifact("report_topic_sizes.json")
        write_json(out_sizes, stats_payloads)
        out_metrics = cfg.artifact("report_metrics.json")
        write_json(out_metrics, [dict(zip(METRICS_HEADER, row)) for row in met_rows])
        out_summary = cfg.artifact("report_correlations.json")
        write_json(out_summary, [dict(zip(summary_header, row)) for row in summary_data])
        outputs += [out_sizes, out_metrics, out_summary]

    out_stab = cfg.artifact("report_stability.json")
    out_stab.write_text(stability_path.read_text(encoding="utf-8"), encoding="utf-8")
    out_box = cfg.artifact("report_boxplots.json")
    out_box.write_text(box_path.read_text(encoding="utf-8"), encoding="utf-8")
    outputs += [out_stab, out_box]
    for path in outputs:
        _emit(cfg, manifest, path)
    print(f"report ({fmt}) -> {', '.join(str(p) for p in outputs)}")


COMMANDS = {
    "ingest": cmd_ingest,
    "chunk": cmd_chunk,
    "normalize": cmd_normalize,
    "lda-fit": cmd_lda_fit,
    "embed-load": cmd_embed_load,
    "cluster": cmd_cluster,
    "reduce-topics": cmd_reduce_topics,
    "topics": cmd_topics,
    "coherence": cmd_coherence,
    "classify-eval": cmd_classify_eval,
    "stability": cmd_stability,
    "senti-aggregate": cmd_senti_aggregate,
    "correlate": cmd_correlate,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fundlens",
        description="Topic modeling and sentiment-performance analytics for fund documents.",
    )
    parser.add_argument("--version", action="version", version=f"fundlens {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} stage")
        p.add_argument("--config", help="pipeline config file (JSON)")
        p.add_argument("--seed", type=int, help="override the run seed")
        p.add_argument("--output", help="override the output directory")
        p.add_argument("--format", choices=["csv", "json"], help="report table format")
    p = sub.add_parser("config", help="show configuration")
    p.add_argument("--config", help="pipeline config file (JSON)")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", help="override the output directory")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--print-defaults", action="store_true", help="print built-in defaults and exit")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints usage; exit code 2 on bad usage
        return int(exc.code or 0)

    try:
        if args.command == "config":
            if args.print_defaults:
                print(print_defaults())
                return 0
            cfg = PipelineConfig.load(args.config, args.seed, args.output, args.format)
            print(json.dumps(cfg.data, indent=2, sort_keys=True))
            return 0

        cfg = PipelineConfig.load(args.config, args.seed, args.output, args.format)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        manifest = RunManifest(command=args.command, config_hash=cfg.config_hash())
        with OutputLock(cfg.output_dir):
            COMMANDS[args.command](cfg, manifest)
            manifest.write(cfg.output_dir)
        return 0
    except (ValueError, FileNotFoundError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
