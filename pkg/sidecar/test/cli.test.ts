// Contract tests: the sidecar's outputs must round-trip through the real
// analysis pipeline binaries with zero validation errors, and the pinned
// models must reproduce frozen scores bit-for-bit across reruns.

import assert from "node:assert/strict";
import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { test } from "node:test";
import { fileURLToPath } from "node:url";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const CLI = path.join(HERE, "..", "src", "cli.js");

const GOLDEN_SENTENCE = "We are thrilled with this quarter's exceptional performance.";
const GOLDEN_GENERAL_SCORE = 0.8; // frozen output of lexicon-general-v1

interface ChunkFixture {
  chunk_id: string;
  doc_id: string;
  fund_id: string | null;
  date: string;
  word_count: number;
  text: string;
}

function tenChunkFixture(): ChunkFixture[] {
  const texts = [
    GOLDEN_SENTENCE,
    "The fund posted a gain as markets rallied and growth improved broadly.",
    "Performance declined and losses widened during the drawdown this month.",
    "The portfolio remains diversified across regions and asset classes.",
    "", // empty text -> null sentiment
    "We are disappointed by the weak results and the failed restructuring.",
    "Outperformance continued with profit growth and bullish positioning.",
    "Legal notice: this document does not constitute an offer of securities.",
    "Redemptions and volatility increased while spreads stayed uncertain.",
    "The strategy seeks long-term appreciation through fundamental analysis.",
  ];
  return texts.map((text, i) => ({
    chunk_id: `doc${Math.floor(i / 2)}#b${i % 2}w0`,
    doc_id: `doc${Math.floor(i / 2)}`,
    fund_id: i % 3 === 0 ? "fundA" : "fundB",
    date: `2024-0${(i % 6) + 1}`,
    word_count: Math.max(text.split(/\s+/).filter(Boolean).length, 1),
    text,
  }));
}

function writeChunks(dir: string, chunks: ChunkFixture[]): string {
  const file = path.join(dir, "chunks.jsonl");
  fs.writeFileSync(file, chunks.map((c) => JSON.stringify(c)).join("\n") + "\n");
  return file;
}

function runCli(args: string[]) {
  return spawnSync(process.execPath, [CLI, ...args], { encoding: "utf-8" });
}

function runPython(args: string[], options: { cwd?: string } = {}) {
  return spawnSync("python3", args, { encoding: "utf-8", cwd: options.cwd });
}

function readJsonl(file: string): Record<string, unknown>[] {
  return fs
    .readFileSync(file, "utf-8")
    .split("\n")
    .filter((line) => line.trim())
    .map((line) => JSON.parse(line));
}

function tmpdir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "sidecar-test-"));
}

test("embed task writes chunk and word embeddings in the shared space", () => {
  const dir = tmpdir();
  const chunks = writeChunks(dir, tenChunkFixture());
  const out = path.join(dir, "emb_chunks.jsonl");
  const wordOut = path.join(dir, "emb_words.jsonl");
  const vocab = path.join(dir, "vocab.txt");
  fs.writeFileSync(vocab, ["gain", "loss", "market", "fund"].join("\n") + "\n");

  const result = runCli([
    "--task", "embed", "--model", "hash-64-v1",
    "--input", chunks, "--output", out,
    "--vocab", vocab, "--word-output", wordOut,
    "--batch-size", "3",
  ]);
  assert.equal(result.status, 0, result.stderr);

  const [chunkHeader, ...chunkRecords] = readJsonl(out);
  assert.deepEqual(chunkHeader, { dim: 64, kind: "chunk", model: "hash-64-v1" });
  assert.equal(chunkRecords.length, 10);
  for (const rec of chunkRecords) {
    assert.equal((rec.v as number[]).length, 64);
    assert.ok((rec.v as number[]).every((x) => Number.isFinite(x)));
  }

  const [wordHeader, ...wordRecords] = readJsonl(wordOut);
  assert.deepEqual(wordHeader, { dim: 64, kind: "word", model: "hash-64-v1" });
  assert.deepEqual(
    wordRecords.map((r) => r.id),
    ["fund", "gain", "loss", "market"],
  );
});

test("identical chunks embed to identical vectors", () => {
  const dir = tmpdir();
  const twin = tenChunkFixture().slice(0, 1);
  const chunks: ChunkFixture[] = [
    { ...twin[0], chunk_id: "a#b0w0" },
    { ...twin[0], chunk_id: "b#b0w0" },
  ];
  const file = writeChunks(dir, chunks);
  const out = path.join(dir, "emb.jsonl");
  assert.equal(runCli(["--task", "embed", "--input", file, "--output", out]).status, 0);
  const [, first, second] = readJsonl(out);
  assert.deepEqual(first.v, second.v);
});

test("sentiment golden score is frozen and positive", () => {
  const dir = tmpdir();
  const chunks = writeChunks(dir, tenChunkFixture());
  const out = path.join(dir, "senti.jsonl");
  const result = runCli(["--task", "sentiment", "--model", "general", "--input", chunks, "--output", out]);
  assert.equal(result.status, 0, result.stderr);
  const records = readJsonl(out);
  assert.equal(records.length, 10);

  const golden = records.find((r) => r.chunk_id === "doc0#b0w0");
  assert.ok(golden);
  const score = golden.score as number;
  assert.ok(score > 0.5, `golden score ${score} must exceed 0.5`);
  assert.ok(Math.abs(score - GOLDEN_GENERAL_SCORE) <= 0.05, `|${score} - ${GOLDEN_GENERAL_SCORE}| > 0.05`);
  assert.equal(golden.model, "lexicon-general-v1");

  const empty = records.find((r) => r.chunk_id === "doc2#b0w0");
  assert.ok(empty);
  assert.equal(empty.score, null);

  for (const rec of records) {
    const s = rec.score;
    assert.ok(s === null || (typeof s === "number" && s >= -1 && s <= 1 && Number.isFinite(s)));
  }
  assert.ok(!fs.readFileSync(out, "utf-8").includes("NaN"));
});

test("finance model goes null on out-of-domain text", () => {
  const dir = tmpdir();
  const chunks = writeChunks(dir, tenChunkFixture());
  const out = path.join(dir, "senti_fin.jsonl");
  assert.equal(
    runCli(["--task", "sentiment", "--model", "finance", "--input", chunks, "--output", out]).status,
    0,
  );
  const records = readJsonl(out);
  const golden = records.find((r) => r.chunk_id === "doc0#b0w0");
  assert.ok(golden);
  assert.equal(golden.score, null); // no finance lexicon hits in the golden sentence
  const bullish = records.find((r) => r.chunk_id === "doc3#b0w0");
  assert.ok(bullish);
  assert.ok((bullish.score as number) > 0);
});

test("reruns are byte-identical (pinned model reproducibility)", () => {
  const dir = tmpdir();
  const chunks = writeChunks(dir, tenChunkFixture());
  const files: string[] = [];
  for (const run of [1, 2]) {
    const emb = path.join(dir, `emb${run}.jsonl`);
    const words = path.join(dir, `words${run}.jsonl`);
    const senti = path.join(dir, `senti${run}.jsonl`);
    assert.equal(
      runCli(["--task", "embed", "--input", chunks, "--output", emb, "--word-output", words]).status,
      0,
    );
    assert.equal(runCli(["--task", "sentiment", "--input", chunks, "--output", senti]).status, 0);
    files.push(emb, words, senti);
  }
  assert.deepEqual(fs.readFileSync(files[0]), fs.readFileSync(files[3]));
  assert.deepEqual(fs.readFileSync(files[1]), fs.readFileSync(files[4]));
  assert.deepEqual(fs.readFileSync(files[2]), fs.readFileSync(files[5]));
});

test("unknown model fails with a nonzero exit and message", () => {
  const dir = tmpdir();
  const chunks = writeChunks(dir, tenChunkFixture());
  const result = runCli(["--task", "embed", "--model", "bert-gigantic", "--input", chunks, "--output", path.join(dir, "x.jsonl")]);
  assert.notEqual(result.status, 0);
  assert.match(result.stderr, /model load failure/);
});

test("empty chunks file produces header-only embedding outputs", () => {
  const dir = tmpdir();
  const chunks = path.join(dir, "chunks.jsonl");
  fs.writeFileSync(chunks, "");
  const out = path.join(dir, "emb.jsonl");
  const words = path.join(dir, "words.jsonl");
  assert.equal(
    runCli(["--task", "embed", "--input", chunks, "--output", out, "--word-output", words]).status,
    0,
  );
  assert.equal(readJsonl(out).length, 1); // header only
  assert.equal(readJsonl(words).length, 1);
});

test("embedding outputs pass the pipeline's validator end to end", () => {
  const dir = tmpdir();
  const chunks = writeChunks(dir, tenChunkFixture());
  const emb = path.join(dir, "emb_chunks.jsonl");
  const words = path.join(dir, "emb_words.jsonl");
  assert.equal(
    runCli(["--task", "embed", "--input", chunks, "--output", emb, "--word-output", words]).status,
    0,
  );
  const outDir = path.join(dir, "out");
  const config = {
    paths: {
      embeddings_chunks: emb,
      embeddings_words: words,
      output_dir: outDir,
    },
  };
  const configPath = path.join(dir, "config.json");
  fs.writeFileSync(configPath, JSON.stringify(config));
  const result = runPython(["-m", "fundlens.cli.main", "embed-load", "--config", configPath]);
  assert.equal(result.status, 0, result.stderr);
  const summary = JSON.parse(fs.readFileSync(path.join(outDir, "embeddings_summary.json"), "utf-8"));
  assert.equal(summary.chunks.count, 10);
  assert.equal(summary.words.count > 0, true);
});

test("sentiment outputs feed the pipeline's aggregation end to end", () => {
  const dir = tmpdir();
  const fixture = tenChunkFixture();
  const chunksInput = writeChunks(dir, fixture);
  const senti = path.join(dir, "sentiment.jsonl");
  assert.equal(runCli(["--task", "sentiment", "--input", chunksInput, "--output", senti]).status, 0);

  const outDir = path.join(dir, "out");
  fs.mkdirSync(outDir);
  fs.copyFileSync(chunksInput, path.join(outDir, "chunks.jsonl"));
  const assignments = path.join(dir, "assignments.jsonl");
  fs.writeFileSync(
    assignments,
    fixture
      .map((c, i) => JSON.stringify({ chunk_id: c.chunk_id, topic: i % 2, max_prob: 0.9 }))
      .join("\n") + "\n",
  );
  const config = {
    paths: { sentiment: senti, assignments, output_dir: outDir },
  };
  const configPath = path.join(dir, "config.json");
  fs.writeFileSync(configPath, JSON.stringify(config));
  const result = runPython(["-m", "fundlens.cli.main", "senti-aggregate", "--config", configPath]);
  assert.equal(result.status, 0, result.stderr);
  const csv = fs.readFileSync(path.join(outDir, "topic_month_sentiment.csv"), "utf-8");
  assert.match(csv, /^model,fund_id,topic,month,mean_score,n_chunks/);
  assert.ok(csv.trim().split("\n").length > 1);
});
