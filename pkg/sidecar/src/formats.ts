// Wire formats shared with the analysis pipeline.
//
// Chunks (input):    {"chunk_id": str, "doc_id": str, "fund_id": str|null,
//                     "date": "YYYY-MM", "word_count": int, "text": str}
// Embeddings (out):  header {"dim": int, "kind": "chunk"|"word", "model": str}
//                    then {"id": str, "v": [float, ...]} per line
// Sentiment (out):   {"chunk_id": str, "model": str, "score": float|null}

import * as fs from "node:fs";
import * as path from "node:path";

export interface ChunkRecord {
  chunk_id: string;
  text: string;
}

export interface EmbeddingHeader {
  dim: number;
  kind: "chunk" | "word";
  model: string;
}

export function readChunksJsonl(filePath: string): ChunkRecord[] {
  const raw = fs.readFileSync(filePath, "utf-8");
  const chunks: ChunkRecord[] = [];
  const seen = new Set<string>();
  let lineno = 0;
  for (const line of raw.split("\n")) {
    lineno += 1;
    const trimmed = line.trim();
    if (!trimmed) continue;
    let obj: unknown;
    try {
      obj = JSON.parse(trimmed);
    } catch (err) {
      throw new Error(`malformed chunk JSON at line ${lineno}: ${(err as Error).message}`);
    }
    const rec = obj as Record<string, unknown>;
    const chunkId = rec["chunk_id"];
    const text = rec["text"];
    if (typeof chunkId !== "string" || !chunkId) {
      throw new Error(`missing chunk_id at line ${lineno}`);
    }
    if (typeof text !== "string") {
      throw new Error(`missing text for chunk ${chunkId} at line ${lineno}`);
    }
    if (seen.has(chunkId)) {
      throw new Error(`duplicate chunk_id ${chunkId} at line ${lineno}`);
    }
    seen.add(chunkId);
    chunks.push({ chunk_id: chunkId, text });
  }
  return chunks;
}

export function readVocabularyTerms(filePath: string): string[] {
  // Accepts either the pipeline's tokens.jsonl ({"chunk_id", "tokens": [...]})
  // or a plain one-term-per-line text file.
  const raw = fs.readFileSync(filePath, "utf-8");
  const terms = new Set<string>();
  for (const line of raw.split("\n")) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    if (trimmed.startsWith("{")) {
      const obj = JSON.parse(trimmed) as { tokens?: unknown };
      if (!Array.isArray(obj.tokens)) {
        throw new Error("vocabulary JSONL lines must carry a tokens array");
      }
      for (const tok of obj.tokens) {
        if (typeof tok === "string" && tok) terms.add(tok);
      }
    } else {
      terms.add(trimmed);
    }
  }
  return [...terms].sort();
}

// Single-writer append to a temp file, finished by an atomic rename.
export class AtomicJsonlWriter {
  private readonly target: string;
  private readonly tmp: string;
  private fd: number;

  constructor(target: string) {
    this.target = target;
    this.tmp = path.join(
      path.dirname(target),
      `.${path.basename(target)}.tmp-${process.pid}`,
    );
    this.fd = fs.openSync(this.tmp, "w");
  }

  writeLine(payload: unknown): void {
    fs.writeSync(this.fd, JSON.stringify(payload) + "\n");
  }

  close(): void {
    fs.closeSync(this.fd);
    fs.renameSync(this.tmp, this.target);
  }

  abort(): void {
    try {
      fs.closeSync(this.fd);
    } finally {
      if (fs.existsSync(this.tmp)) fs.unlinkSync(this.tmp);
    }
  }
}

export function roundFloat(x: number): number {
  // Keep serialized vectors compact and platform-stable.
  return Number(x.toFixed(9));
}
