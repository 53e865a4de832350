import json
from pathlib import Path

import numpy as np
import pytest

from fundlens.cli.config import PipelineConfig
from fundlens.cli.main import main
from fundlens.cli.manifest import file_digest
from fundlens.cli.reports import METRICS_HEADER, metrics_rows
from fundlens.corpus import read_chunks_jsonl

MARKET = (
    "the market rallied strongly and the inflation outlook improved while the "
    "economy continued growing through the quarter with rates easing again"
)
LEGAL = (
    "this document is confidential and does not constitute an offer to sell any "
    "securities in any jurisdiction and it is provided for information only"
)


def build_documents(path: Path):
    docs = []
    for f, fund in enumerate(["f1", "f2"]):
        for m, month in enumerate(["2024-01", "2024-02", "2024-03"]):
            docs.append(
                {
                    "doc_id": f"d{f}{m}",
                    "manager_id": f"mgr{f}",
                    "fund_id": fund,
                    "doc_type": "monthly_report",
                    "date": month,
                    "blocks": [" ".join([MARKET] * 4), " ".join([LEGAL] * 4)],
                }
            )
    path.write_text("\n".join(json.dumps(d) for d in docs) + "\n", encoding="utf-8")
    return docs


def build_embeddings(chunks, chunk_path: Path, word_path: Path, dim=6, seed=0):
    rng = np.random.default_rng(seed)
    lines = [json.dumps({"dim": dim, "kind": "chunk", "model": "fixture"})]
    for c in chunks:
        blob = 0 if "market" in c.raw_text else 1
        base = np.zeros(dim)
        base[blob] = 1.0
        vec = base + rng.normal(scale=0.02, size=dim)
        lines.append(json.dumps({"id": c.chunk_id, "v": [float(x) for x in vec]}))
    chunk_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    words = {"market": 0, "inflation": 0, "economy": 0, "document": 1, "offer": 1, "security": 1}
    wlines = [json.dumps({"dim": dim, "kind": "word", "model": "fixture"})]
    for term, blob in words.items():
        base = np.zeros(dim)
        base[blob] = 1.0
        vec = base + rng.normal(scale=0.02, size=dim)
        wlines.append(json.dumps({"id": term, "v": [float(x) for x in vec]}))
    word_path.write_text("\n".join(wlines) + "\n", encoding="utf-8")


def build_sentiment(chunks, path: Path):
    lines = []
    for c in chunks:
        base = 0.6 if "market" in c.raw_text else -0.2
        for model in ("general", "finance"):
            score = base + (0.05 if model == "finance" else 0.0)
            lines.append(json.dumps({"chunk_id": c.chunk_id, "model": model, "score": score}))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_returns(path: Path):
    rows = ["fund_id,month,ret"]
    for fund in ("f1", "f2"):
        for month, ret in [("2024-02", 0.011), ("2024-03", -0.004), ("2024-04", 0.02)]:
            rows.append(f"{fund},{month},{ret}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def build_annotations(path: Path):
    rows = ["model_id,topic_id,category,percent,n_samples,n_members"]
    rows.append("lda,0,Market Update,80.0,10,6")
    rows.append("lda,0,Disclosure,20.0,10,6")
    rows.append("lda,1,Disclosure,90.0,10,6")
    rows.append("lda,1,Other,10.0,10,6")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


@pytest.fixture()
def workspace(tmp_path):
    inputs = tmp_path / "inputs"
    inputs.mkdir()
    out = tmp_path / "out"
    build_documents(inputs / "documents.jsonl")
    build_returns(inputs / "returns.csv")
    build_annotations(inputs / "annotations.csv")
    config = {
        "seed": 7,
        "paths": {
            "documents": str(inputs / "documents.jsonl"),
            "embeddings_chunks": str(inputs / "embeddings_chunks.jsonl"),
            "embeddings_words": str(inputs / "embeddings_words.jsonl"),
            "sentiment": str(inputs / "sentiment.jsonl"),
            "returns": str(inputs / "returns.csv"),
            "annotations": str(inputs / "annotations.csv"),
            "assignments_a": str(out / "lda_assignments.jsonl"),
            "assignments_b": str(out / "cluster_assignments.jsonl"),
            "output_dir": str(out),
        },
        "corpus": {"min_doc_freq": 2},
        "lda": {"k": 2, "iterations": 12},
        "embedtm": {"d_target": 3, "min_topic_size": 3, "target_k": 2},
        "sentperf": {"n_min": 2},
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    return {"inputs": inputs, "out": out, "config": config_path, "tmp": tmp_path}


def run(ws, command, *extra):
    return main([command, "--config", str(ws["config"]), *extra])


def run_pipeline(ws):
    assert run(ws, "ingest") == 0
    assert run(ws, "chunk") == 0
    chunks = read_chunks_jsonl(ws["out"] / "chunks.jsonl")
    build_embeddings(chunks, ws["inputs"] / "embeddings_chunks.jsonl", ws["inputs"] / "embeddings_words.jsonl")
    build_sentiment(chunks, ws["inputs"] / "sentiment.jsonl")
    for cmd in (
        "normalize", "lda-fit", "topics", "embed-load", "cluster", "reduce-topics",
        "coherence", "classify-eval", "stability", "senti-aggregate", "correlate", "report",
    ):
        assert run(ws, cmd) == 0, cmd
    return chunks


class TestPipeline:
    def test_full_pipeline_artifacts(self, workspace, capsys):
        chunks = run_pipeline(workspace)
        out = workspace["out"]
        # 6 docs x 2 blocks, each block one window (under 400 words)
        assert len(chunks) == 12
        assert all(50 <= c.word_count <= 400 for c in chunks)
        for name in (
            "documents.jsonl", "chunks.jsonl", "tokens.jsonl",
            "lda_model.fltm", "lda_assignments.jsonl", "lda_loglik.csv", "lda_topic_stats.json",
            "lda_topics.csv", "embeddings_summary.json",
            "cluster_model.json", "cluster_assignments.jsonl", "cluster_topic_words.json",
            "cluster_topic_stats.json", "cluster_model_reduced.json",
            "coherence.csv", "coherence.json",
            "predicted_classes.csv", "classify_metrics.csv", "classify_metrics.json",
            "stability.csv", "stability_heatmap.json",
            "topic_month_sentiment.csv", "fund_correlations.csv", "summary.csv",
            "boxplot_payload.json",
            "report_topic_sizes.csv", "report_metrics.csv", "report_correlations.csv",
            "report_stability.json", "report_boxplots.json",
        ):
            assert (out / name).exists(), name

        summary = (out / "summary.csv").read_text(encoding="utf-8").splitlines()
        assert summary[0] == "model,topic_id,annotation,count,mean,std,p_value,significant"
        assert len(summary) > 1  # correlations exist at n_min=2

        heatmap = json.loads((out / "stability_heatmap.json").read_text(encoding="utf-8"))
        assert set(heatmap) >= {"row_labels", "col_labels", "values", "nonzero_fraction"}

        words = json.loads((out / "cluster_topic_words.json").read_text(encoding="utf-8"))
        assert words["centroid_proximity"] is not None
        assert words["ctfidf_mmr"] is not None

    def test_manifest_digests_verify(self, workspace):
        run_pipeline(workspace)
        out = workspace["out"]
        manifest = json.loads((out / "manifest_lda_fit.json").read_text(encoding="utf-8"))
        for rel, digest in manifest["outputs"].items():
            assert file_digest(out / rel) == digest
        # tamper detection
        (out / "lda_topics.csv").write_text("tampered", encoding="utf-8")
        topics_manifest = json.loads((out / "manifest_topics.json").read_text(encoding="utf-8"))
        assert file_digest(out / "lda_topics.csv") != topics_manifest["outputs"]["lda_topics.csv"]

    def test_rerun_is_byte_identical(self, workspace):
        run_pipeline(workspace)
        out = workspace["out"]
        manifests = sorted(out.glob("manifest_*.json"))
        first = {
            m.name: json.loads(m.read_text(encoding="utf-8"))["outputs"] for m in manifests
        }
        run_pipeline(workspace)
        for m in manifests:
            second = json.loads(m.read_text(encoding="utf-8"))["outputs"]
            assert second == first[m.name], m.name

    def test_empty_correlations_give_header_only_csv(self, workspace):
        # n_min above any series length -> no defined correlations
        cfg = json.loads(workspace["config"].read_text(encoding="utf-8"))
        cfg["sentperf"]["n_min"] = 50
        workspace["config"].write_text(json.dumps(cfg), encoding="utf-8")
        run_pipeline(workspace)
        summary = (workspace["out"] / "summary.csv").read_text(encoding="utf-8")
        assert summary == "model,topic_id,annotation,count,mean,std,p_value,significant\n"
        correlations = (workspace["out"] / "fund_correlations.csv").read_text(encoding="utf-8")
        assert correlations == "model,fund_id,topic,r,n_pairs\n"

    def test_lda_fit_deterministic_model_digest(self, workspace):
        assert run(workspace, "ingest") == 0
        assert run(workspace, "chunk") == 0
        chunks = read_chunks_jsonl(workspace["out"] / "chunks.jsonl")
        build_embeddings(chunks, workspace["inputs"] / "embeddings_chunks.jsonl",
                         workspace["inputs"] / "embeddings_words.jsonl")
        assert run(workspace, "normalize") == 0
        assert run(workspace, "lda-fit") == 0
        d1 = file_digest(workspace["out"] / "lda_model.fltm")
        assert run(workspace, "lda-fit") == 0
        assert file_digest(workspace["out"] / "lda_model.fltm") == d1


class TestCliContract:
    def test_unknown_subcommand_exit_2(self, workspace, capsys):
        assert main(["frobnicate", "--config", str(workspace["config"])]) == 2

    def test_missing_upstream_artifact_exit_2(self, workspace, capsys):
        assert run(workspace, "chunk") == 2
        err = capsys.readouterr().err
        assert "documents.jsonl" in err and "ingest" in err

    def test_missing_input_path_exit_2(self, workspace, capsys):
        bad = json.loads(workspace["config"].read_text(encoding="utf-8"))
        bad["paths"]["annotations"] = str(workspace["tmp"] / "nope.csv")
        bad_path = workspace["tmp"] / "bad.json"
        bad_path.write_text(json.dumps(bad), encoding="utf-8")
        assert main(["classify-eval", "--config", str(bad_path)]) == 2

    def test_report_before_upstream_exit_2(self, workspace, capsys):
        assert run(workspace, "report") == 2
        assert "missing upstream artifact" in capsys.readouterr().err

    def test_config_print_defaults(self, capsys):
        assert main(["config", "--print-defaults"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["lda"]["k"] == 20
        assert payload["corpus"]["max_len"] == 400
        assert payload["embedtm"]["min_topic_size"] == 10
        assert payload["eval"]["window"] == 110
        assert payload["sentperf"]["n_min"] == 6

    def test_flag_overrides_config_file(self, workspace, capsys):
        assert main(["config", "--config", str(workspace["config"]), "--seed", "99"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["seed"] == 99

    def test_env_override(self, workspace, monkeypatch, capsys):
        monkeypatch.setenv("FUNDLENS_SEED", "55")
        assert main(["config", "--config", str(workspace["config"])]) == 0
        assert json.loads(capsys.readouterr().out)["seed"] == 55

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"bogus_section": {}}', encoding="utf-8")
        assert main(["config", "--config", str(bad)]) == 2
        assert main(["ingest", "--config", str(bad)]) == 2

    def test_lock_file_conflict(self, workspace, capsys):
        out = workspace["out"]
        out.mkdir(parents=True, exist_ok=True)
        (out / ".fundlens.lock").write_text("123", encoding="utf-8")
        assert run(workspace, "ingest") == 2
        assert "locked" in capsys.readouterr().err
        (out / ".fundlens.lock").unlink()


class TestMetricsRows:
    def test_published_bundle_single_row(self):
        classify = {"lda20": {"precision": 0.9237, "recall": 0.7331, "f1": 0.8174}}
        coherence = {"lda20": {"c_v": {"aggregate": 0.5442}, "c_umass": {"aggregate": -2.1801}}}
        rows = metrics_rows(classify, coherence)
        assert len(rows) == 1
        assert rows[0] == ["lda20", 0.9237, 0.7331, 0.8174, 0.5442, -2.1801]
        assert METRICS_HEADER == ["model", "precision", "recall", "f1", "c_v", "c_umass"]

    def test_outer_join_blanks(self):
        rows = metrics_rows({"a": {"precision": 1.0, "recall": 1.0, "f1": 1.0}}, {"b": {"c_v": {"aggregate": 0.5}}})
        assert [r[0] for r in rows] == ["a", "b"]
        assert rows[0][4] is None and rows[1][1] is None
