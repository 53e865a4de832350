// Batch inference sidecar: produces the embedding and sentiment artifacts
// the analysis pipeline consumes, using pinned deterministic backends.
//
// Usage:
//   sidecar --task embed --model hash-256-v1 --input chunks.jsonl \
//           --output emb_chunks.jsonl [--vocab tokens.jsonl] \
//           [--word-output emb_words.jsonl] [--batch-size 64]
//   sidecar --task sentiment --model general --input chunks.jsonl \
//           --output sentiment.jsonl [--batch-size 64]
//
// Exit codes: 0 success, 1 failure (unknown model, bad input, I/O error).

import { AtomicJsonlWriter, readChunksJsonl, readVocabularyTerms, roundFloat } from "./formats.js";
import { DEFAULT_EMBEDDING_MODEL, EMBEDDING_MODELS, HashEmbedder, tokenize } from "./hashEmbedder.js";
import { DEFAULT_SENTIMENT_MODEL, SENTIMENT_MODELS } from "./sentimentModels.js";

interface CliArgs {
  task: string;
  model: string;
  input: string;
  output: string;
  wordOutput?: string;
  vocab?: string;
  batchSize: number;
}

export function parseArgs(argv: string[]): CliArgs {
  const args: Partial<CliArgs> = { batchSize: 64 };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${flag}`);
      return argv[i];
    };
    switch (flag) {
      case "--task":
        args.task = next();
        break;
      case "--model":
        args.model = next();
        break;
      case "--input":
        args.input = next();
        break;
      case "--output":
        args.output = next();
        break;
      case "--word-output":
        args.wordOutput = next();
        break;
      case "--vocab":
        args.vocab = next();
        break;
      case "--batch-size": {
        const parsed = Number(next());
        if (!Number.isInteger(parsed) || parsed < 1) {
          throw new Error("--batch-size must be a positive integer");
        }
        args.batchSize = parsed;
        break;
      }
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!args.task) throw new Error("--task is required (embed or sentiment)");
  if (!args.input) throw new Error("--input is required");
  if (!args.output) throw new Error("--output is required");
  if (!args.model) {
    args.model = args.task === "embed" ? DEFAULT_EMBEDDING_MODEL : DEFAULT_SENTIMENT_MODEL;
  }
  return args as CliArgs;
}

function* batches<T>(items: T[], size: number): Generator<T[]> {
  for (let i = 0; i < items.length; i += size) {
    yield items.slice(i, i + size);
  }
}

export function runEmbed(args: CliArgs): void {
  const spec = EMBEDDING_MODELS[args.model];
  if (!spec) {
    throw new Error(
      `model load failure: unknown embedding model ${args.model} ` +
      `(available: ${Object.keys(EMBEDDING_MODELS).join(", ")})`,
    );
  }
  const embedder = new HashEmbedder(spec.dim);
  const chunks = readChunksJsonl(args.input);

  const chunkWriter = new AtomicJsonlWriter(args.output);
  try {
    chunkWriter.writeLine({ dim: spec.dim, kind: "chunk", model: spec.id });
    for (const batch of batches(chunks, args.batchSize)) {
      for (const chunk of batch) {
        const v = embedder.embed(chunk.text).map(roundFloat);
        chunkWriter.writeLine({ id: chunk.chunk_id, v });
      }
    }
    chunkWriter.close();
  } catch (err) {
    chunkWriter.abort();
    throw err;
  }

  const wordOutput = args.wordOutput;
  if (!wordOutput) return;
  // Word vectors live in the same space: each term is embedded as a
  // single-token text. The vocabulary comes from --vocab when given,
  // otherwise from the chunks' own tokens.
  let terms: string[];
  if (args.vocab) {
    terms = readVocabularyTerms(args.vocab);
  } else {
    const seen = new Set<string>();
    for (const chunk of chunks) {
      for (const tok of tokenize(chunk.text)) seen.add(tok);
    }
    terms = [...seen].sort();
  }
  const wordWriter = new AtomicJsonlWriter(wordOutput);
  try {
    wordWriter.writeLine({ dim: spec.dim, kind: "word", model: spec.id });
    for (const batch of batches(terms, args.batchSize)) {
      for (const term of batch) {
        const v = embedder.embed(term).map(roundFloat);
        wordWriter.writeLine({ id: term, v });
      }
    }
    wordWriter.close();
  } catch (err) {
    wordWriter.abort();
    throw err;
  }
}

export function runSentiment(args: CliArgs): void {
  const model = SENTIMENT_MODELS[args.model];
  if (!model) {
    throw new Error(
      `model load failure: unknown sentiment model ${args.model} ` +
      `(available: ${Object.keys(SENTIMENT_MODELS).join(", ")})`,
    );
  }
  const chunks = readChunksJsonl(args.input);
  const writer = new AtomicJsonlWriter(args.output);
  try {
    for (const batch of batches(chunks, args.batchSize)) {
      for (const chunk of batch) {
        const score = model.score(chunk.text);
        writer.writeLine({
          chunk_id: chunk.chunk_id,
          model: model.id,
          score: score === null ? null : roundFloat(score),
        });
      }
    }
    writer.close();
  } catch (err) {
    writer.abort();
    throw err;
  }
}

export function main(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
    if (args.task === "embed") {
      runEmbed(args);
    } else if (args.task === "sentiment") {
      runSentiment(args);
    } else {
      throw new Error(`unknown task ${args.task} (expected embed or sentiment)`);
    }
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
