"""Latent topic model fit by collapsed Gibbs sampling.

One chain per fit, seeded and fully deterministic: identical (corpus,
config) pairs produce bit-identical models. Topic-word (phi) and
chunk-topic (theta) distributions are estimated from counts averaged over
post-burn-in sweeps and smoothed by the symmetric priors.

Chunks whose largest topic proportion falls below ``tau`` are assigned the
``OUTLIER`` label instead of a topic.
"""

from __future__ import annotations

import json
import random
import struct
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from fundlens import OUTLIER
from fundlens.corpus.vocabulary import TokenizedCorpus, Vocabulary

MODEL_MAGIC = b"FLTM"
MODEL_FORMAT_VERSION = 1

_PERPLEXITY_SEED_SALT = 0x9E3779B9


@dataclass(frozen=True)
class LdaConfig:
    k: int
    alpha: float | None = None  # None -> 1/k
    beta: float | None = None  # None -> 1/k
    iterations: int = 50
    burn_in: int | None = None  # None -> iterations // 2
    seed: int = 0
    tau: float = 0.25

    def resolved(self) -> "LdaConfig":
        if self.k < 1:
            raise ValueError("k must be >= 1")
        cfg = self
        if cfg.alpha is None:
            cfg = replace(cfg, alpha=1.0 / cfg.k)
        if cfg.beta is None:
            cfg = replace(cfg, beta=1.0 / cfg.k)
        if cfg.burn_in is None:
            cfg = replace(cfg, burn_in=cfg.iterations // 2)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if self.beta is not None and self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.burn_in is not None and not 0 <= self.burn_in < self.iterations:
            raise ValueError("burn_in must satisfy 0 <= burn_in < iterations")
        if not 0 <= self.tau < 1:
            raise ValueError("tau must be in [0, 1)")


@dataclass
class TopicAssignment:
    chunk_id: str
    topic: int  # topic index, or OUTLIER
    max_prob: float | None  # None for assignment sources without probabilities


@dataclass
class LdaModel:
    config: LdaConfig
    vocabulary: Vocabulary
    chunk_ids: list[str]
    phi: np.ndarray  # (k, v) rows sum to 1
    theta: np.ndarray  # (n_chunks, k) rows sum to 1
    n_dk: np.ndarray = field(repr=False, default=None)  # final-sweep counts
    n_kw: np.ndarray = field(repr=False, default=None)
    n_k: np.ndarray = field(repr=False, default=None)
    log_likelihood: list[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.phi.shape[0]

    @property
    def v(self) -> int:
        return self.phi.shape[1]


def conditional_distribution(
    n_dk_d: Sequence[float],
    n_kw_w: Sequence[float],
    n_k: Sequence[float],
    n_terms: int,
    alpha: float,
    beta: float,
) -> np.ndarray:
    """Collapsed Gibbs conditional p(z=k | rest) for one token.

    All count vectors exclude the token being resampled:
    p(k) ∝ (n_dk + alpha) * (n_kw + beta) / (n_k + V * beta).
    """
    nd = np.asarray(n_dk_d, dtype=float)
    nw = np.asarray(n_kw_w, dtype=float)
    nk = np.asarray(n_k, dtype=float)
    if (nd < 0).any() or (nw < 0).any() or (nk < 0).any():
        raise ValueError("counts must be non-negative")
    weights = (nd + alpha) * (nw + beta) / (nk + n_terms * beta)
    return weights / weights.sum()


def _joint_log_likelihood(
    n_kw: np.ndarray, n_dk: np.ndarray, doc_lens: np.ndarray, alpha: float, beta: float
) -> float:
    k, v = n_kw.shape
    d = n_dk.shape[0]
    ll = k * (gammaln(v * beta) - v * gammaln(beta))
    ll += gammaln(n_kw + beta).sum() - gammaln(n_kw.sum(axis=1) + v * beta).sum()
    ll += d * (gammaln(k * alpha) - k * gammaln(alpha))
    ll += gammaln(n_dk + alpha).sum() - gammaln(doc_lens + k * alpha).sum()
    return float(ll)


def fit_lda(corpus: TokenizedCorpus, config: LdaConfig) -> LdaModel:
    """Run seeded collapsed Gibbs sweeps and estimate phi/theta."""
    cfg = config.resolved()
    k, alpha, beta = cfg.k, cfg.alpha, cfg.beta
    docs = corpus.encoded
    v = corpus.vocabulary.size
    if not docs or all(len(doc) == 0 for doc in docs):
        raise ValueError("empty corpus")
    for idx, doc in enumerate(docs):
        if len(doc) == 0:
            raise ValueError(f"chunk {corpus.chunk_ids[idx]} has no tokens")

    rng = random.Random(cfg.seed)
    n_docs = len(docs)
    v_beta = v * beta

    # Hot loop runs on plain Python lists; numpy only at sweep boundaries.
    n_dk = [[0] * k for _ in range(n_docs)]
    n_kw = [[0] * k for _ in range(v)]  # word-major
    n_k = [0] * k
    z: list[list[int]] = []
    for d, doc in enumerate(docs):
        row = n_dk[d]
        zs = []
        for w in doc:
            topic = rng.randrange(k)
            zs.append(topic)
            row[topic] += 1
            n_kw[w][topic] += 1
            n_k[topic] += 1
        z.append(zs)

    doc_lens = np.array([len(doc) for doc in docs], dtype=np.int64)
    samples = cfg.iterations - cfg.burn_in
    acc_dk = np.zeros((n_docs, k))
    acc_kw = np.zeros((v, k))
    log_likelihood: list[float] = []
    topic_range = range(k)

    for sweep in range(1, cfg.iterations + 1):
        for d, doc in enumerate(docs):
            row = n_dk[d]
            zs = z[d]
            for i, w in enumerate(doc):
                old = zs[i]
                row[old] -= 1
                col = n_kw[w]
                col[old] -= 1
                n_k[old] -= 1

                total = 0.0
                probs = []
                for kk in topic_range:
                    p = (row[kk] + alpha) * (col[kk] + beta) / (n_k[kk] + v_beta)
                    probs.append(p)
                    total += p
                u = rng.random() * total
                acc = 0.0
                new = k - 1
                for kk in topic_range:
                    acc += probs[kk]
                    if u < acc:
                        new = kk
                        break

                zs[i] = new
                row[new] += 1
                col[new] += 1
                n_k[new] += 1

        n_dk_np = np.array(n_dk, dtype=np.int64)
        n_kw_np = np.array(n_kw, dtype=np.int64).T  # (k, v)
        log_likelihood.append(_joint_log_likelihood(n_kw_np, n_dk_np, doc_lens, alpha, beta))
        if sweep > cfg.burn_in:
            acc_dk += n_dk_np
            acc_kw += np.array(n_kw, dtype=np.int64)

    mean_kw = (acc_kw / samples).T  # (k, v)
    mean_dk = acc_dk / samples
    phi = (mean_kw + beta) / (mean_kw.sum(axis=1, keepdims=True) + v_beta)
    theta = (mean_dk + alpha) / (doc_lens[:, None] + k * alpha)

    return LdaModel(
        config=cfg,
        vocabulary=corpus.vocabulary,
        chunk_ids=list(corpus.chunk_ids),
        phi=phi,
        theta=theta,
        n_dk=np.array(n_dk, dtype=np.int64),
        n_kw=np.array(n_kw, dtype=np.int64).T,
        n_k=np.array(n_k, dtype=np.int64),
        log_likelihood=log_likelihood,
    )


def top_words(model: LdaModel, topic: int, n: int) -> list[tuple[str, float]]:
    """Top-n terms of one topic by probability; ties break toward lower term id."""
    if not 0 <= topic < model.k:
        raise ValueError(f"topic {topic} out of range for k={model.k}")
    if n < 1:
        raise ValueError("n must be >= 1")
    row = model.phi[topic]
    order = sorted(range(model.v), key=lambda w: (-row[w], w))[: min(n, model.v)]
    terms = model.vocabulary.terms
    return [(terms[w], float(row[w])) for w in order]


def assign_chunks(model: LdaModel, tau: float | None = None) -> list[TopicAssignment]:
    """Argmax-theta assignment per chunk, with OUTLIER below the tau threshold."""
    if tau is None:
        tau = model.config.tau
    if not 0 <= tau < 1:
        raise ValueError("tau must be in [0, 1)")
    out: list[TopicAssignment] = []
    for chunk_id, row in zip(model.chunk_ids, model.theta):
        best = int(np.argmax(row))  # argmax returns the lowest index on ties
        max_prob = float(row[best])
        topic = OUTLIER if max_prob < tau else best
        out.append(TopicAssignment(chunk_id=chunk_id, topic=topic, max_prob=max_prob))
    return out


def _fold_in_theta(
    model: LdaModel,
    docs: list[list[int]],
    iterations: int,
    burn_in: int,
    rng: random.Random,
) -> np.ndarray:
    k = model.k
    alpha = model.config.alpha
    phi = model.phi
    samples = iterations - burn_in
    thetas = np.zeros((len(docs), k))
    for d, doc in enumerate(docs):
        counts = [0] * k
        zs = []
        for _ in doc:
            topic = rng.randrange(k)
            zs.append(topic)
            counts[topic] += 1
        acc = np.zeros(k)
        for sweep in range(1, iterations + 1):
            for i, w in enumerate(doc):
                old = zs[i]
                counts[old] -= 1
                col = phi[:, w]
                weights = [(counts[kk] + alpha) * col[kk] for kk in range(k)]
                total = sum(weights)
                u = rng.random() * total
                running = 0.0
                new = k - 1
                for kk in range(k):
                    running += weights[kk]
                    if u < running:
                        new = kk
                        break
                zs[i] = new
                counts[new] += 1
            if sweep > burn_in:
                acc += counts
        thetas[d] = (acc / samples + alpha) / (len(doc) + k * alpha)
    return thetas


def perplexity(
    model: LdaModel,
    heldout: TokenizedCorpus,
    fold_in_iterations: int = 20,
    fold_in_burn_in: int = 10,
) -> float:
    """Held-out perplexity exp(-mean log p(w|d)) with fold-in theta.

    Held-out chunks are re-encoded against the model vocabulary; any term
    the model has never seen is an error.
    """
    vocab = model.vocabulary
    unseen = sorted(
        {heldout.vocabulary.terms[w] for doc in heldout.encoded for w in doc}
        - set(vocab.terms)
    )
    if unseen:
        raise ValueError(f"terms not in model vocabulary: {', '.join(unseen)}")
    remapped = [
        [vocab.id_of(heldout.vocabulary.terms[w]) for w in doc] for doc in heldout.encoded
    ]
    remapped = [doc for doc in remapped if doc]
    if not remapped:
        raise ValueError("empty corpus")

    rng = random.Random(model.config.seed ^ _PERPLEXITY_SEED_SALT)
    theta = _fold_in_theta(model, remapped, fold_in_iterations, fold_in_burn_in, rng)
    total_log = 0.0
    n_tokens = 0
    for d, doc in enumerate(remapped):
        probs = theta[d] @ model.phi  # (v,)
        for w in doc:
            total_log += float(np.log(probs[w]))
            n_tokens += 1
    return float(np.exp(-total_log / n_tokens))


def save_model(model: LdaModel, path: str | Path) -> None:
    """Persist the model: JSON header + little-endian float64/int32 sections.

    Layout: magic ``FLTM``, uint32 format version, uint32 header length,
    UTF-8 JSON header, then phi (k*v float64), theta (n*k float64),
    assignment topics (n int32) and max probabilities (n float64), all
    little-endian, row-major.
    """
    path = Path(path)
    assignments = assign_chunks(model)
    header = {
        "format": MODEL_FORMAT_VERSION,
        "kind": "lda",
        "k": model.k,
        "v": model.v,
        "n_chunks": len(model.chunk_ids),
        "config": {
            "k": model.config.k,
            "alpha": model.config.alpha,
            "beta": model.config.beta,
            "iterations": model.config.iterations,
            "burn_in": model.config.burn_in,
            "seed": model.config.seed,
            "tau": model.config.tau,
        },
        "terms": list(model.vocabulary.terms),
        "doc_freq": model.vocabulary.doc_freq.tolist(),
        "total_tokens": model.vocabulary.total_tokens,
        "chunk_ids": model.chunk_ids,
        "log_likelihood": model.log_likelihood,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with path.open("wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<II", MODEL_FORMAT_VERSION, len(header_bytes)))
        fh.write(header_bytes)
        fh.write(model.phi.astype("<f8").tobytes(order="C"))
        fh.write(model.theta.astype("<f8").tobytes(order="C"))
        fh.write(np.array([a.topic for a in assignments], dtype="<i4").tobytes())
        fh.write(np.array([a.max_prob for a in assignments], dtype="<f8").tobytes())


def load_model(path: str | Path) -> LdaModel:
    path = Path(path)
    blob = path.read_bytes()
    if blob[:4] != MODEL_MAGIC:
        raise ValueError(f"not a model file: {path}")
    version, header_len = struct.unpack("<II", blob[4:12])
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version}")
    header = json.loads(blob[12 : 12 + header_len].decode("utf-8"))
    k, v, n = header["k"], header["v"], header["n_chunks"]
    offset = 12 + header_len
    phi = np.frombuffer(blob, dtype="<f8", count=k * v, offset=offset).reshape(k, v).copy()
    offset += k * v * 8
    theta = np.frombuffer(blob, dtype="<f8", count=n * k, offset=offset).reshape(n, k).copy()
    cfg = LdaConfig(**header["config"])
    vocab = Vocabulary(
        terms=tuple(header["terms"]),
        doc_freq=np.array(header["doc_freq"], dtype=np.int64),
        total_tokens=header["total_tokens"],
    )
    return LdaModel(
        config=cfg,
        vocabulary=vocab,
        chunk_ids=list(header["chunk_ids"]),
        phi=phi,
        theta=theta,
        log_likelihood=list(header.get("log_likelihood", [])),
    )
