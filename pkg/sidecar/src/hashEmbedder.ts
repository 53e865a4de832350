// Deterministic feature-hashing text embedder.
//
// Every token hashes to one of `dim` buckets with a +/-1 sign drawn from the
// hash; the bucket sums are L2-normalized. Chunks and single-term "word"
// texts therefore live in the same vector space, which is exactly what the
// downstream centroid-proximity keyword ranking needs.

const FNV_OFFSET = 0x811c9dc5;
const FNV_PRIME = 0x01000193;

export function fnv1a32(text: string): number {
  let hash = FNV_OFFSET;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, FNV_PRIME) >>> 0;
  }
  return hash >>> 0;
}

export function tokenize(text: string): string[] {
  return text
    .toLowerCase()
    .split(/\s+/)
    .map((tok) => tok.replace(/^[^a-z0-9]+|[^a-z0-9]+$/g, ""))
    .filter((tok) => tok.length > 0);
}

export class HashEmbedder {
  constructor(readonly dim: number) {
    if (!Number.isInteger(dim) || dim < 2) {
      throw new Error(`embedding dim must be an integer >= 2, got ${dim}`);
    }
  }

  embed(text: string): number[] {
    const vec = new Array<number>(this.dim).fill(0);
    for (const tok of tokenize(text)) {
      const h = fnv1a32(tok);
      const index = h % this.dim;
      const sign = (h >>> 31) & 1 ? -1 : 1;
      vec[index] += sign;
    }
    const norm = Math.sqrt(vec.reduce((acc, x) => acc + x * x, 0));
    if (norm === 0) return vec;
    return vec.map((x) => x / norm);
  }
}

export interface EmbeddingModelSpec {
  id: string;
  dim: number;
}

// Pinned embedding backends; the id is recorded verbatim in output headers.
export const EMBEDDING_MODELS: Record<string, EmbeddingModelSpec> = {
  "hash-64-v1": { id: "hash-64-v1", dim: 64 },
  "hash-256-v1": { id: "hash-256-v1", dim: 256 },
};

export const DEFAULT_EMBEDDING_MODEL = "hash-256-v1";
