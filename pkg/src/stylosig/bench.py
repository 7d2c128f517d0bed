"""Scaling benchmark over synthetic corpora of controlled size.

The corpora are fully deterministic (no RNG): token counts decay
harmonically over a fixed vocabulary with subject-dependent offsets, so
doubling docs_per_subject doubles the data volume while keeping the text
statistics comparable.  Repeats therefore measure timing noise only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import classifiers
from .corpus import Corpus, Document, Subject
from .features import FeatureModel, build_vocabulary, vectorize
from .possibility import to_possibility

DEFAULT_SUBJECTS = 10
DEFAULT_DOC_TOKENS = 400
DEFAULT_VOCAB_WORDS = 2000
DEFAULT_PROFILE_SIZE = 500
DEFAULT_ALPHA = 0.01


def synthetic_corpus(
    n_subjects: int,
    docs_per_subject: int,
    doc_tokens: int = DEFAULT_DOC_TOKENS,
    vocab_words: int = DEFAULT_VOCAB_WORDS,
) -> Corpus:
    """Deterministic corpus with ``doc_tokens`` tokens in every document."""
    if n_subjects < 1 or docs_per_subject < 2 or doc_tokens < 1:
        raise ValueError("need >= 1 subject, >= 2 docs each, >= 1 token per doc")
    subjects = tuple(Subject(s, f"subject{s:03d}") for s in range(n_subjects))
    documents = []
    for s in range(n_subjects):
        for d in range(docs_per_subject):
            parts = []
            remaining = doc_tokens
            rank = 0
            while remaining > 0:
                count = min(max(1, doc_tokens // (2 * (rank + 1))), remaining)
                # word choice depends on the subject only, so test documents
                # stay in-vocabulary no matter how the corpus is split
                word_id = (31 * s + 7 * rank) % vocab_words
                parts.append(f"w{word_id:05d} " * count)
                remaining -= count
                rank += 1
            documents.append(Document(f"subject{s:03d}/doc{d:04d}.txt", s, "".join(parts)))
    return Corpus(subjects, tuple(documents))


def time_attribution(corpus: Corpus, profile_size: int = DEFAULT_PROFILE_SIZE, alpha: float = DEFAULT_ALPHA) -> float:
    """Seconds for one end-to-end pass: extract, build vocabulary, train, score."""
    fmodel = FeatureModel("ngram", (1, 2))
    started = time.perf_counter()
    train_docs = []
    test_docs = []
    for subj in corpus.subjects:
        docs = corpus.by_subject[subj.id]
        cut = max(1, (4 * len(docs)) // 5)
        train_docs.extend(docs[:cut])
        test_docs.extend(docs[cut:])
    counts = [fmodel.extract(doc) for doc in train_docs]
    vocab = build_vocabulary(counts, fmodel, profile_size)
    pairs = [(vectorize(c, vocab), doc.subject) for c, doc in zip(counts, train_docs)]
    model = classifiers.mnb_train(pairs, vocab, alpha, corpus.subject_labels)
    for doc in test_docs:
        vector = vectorize(fmodel.extract(doc), vocab)
        to_possibility(classifiers.mnb_posterior(model, vector))
    return time.perf_counter() - started


@dataclass(frozen=True)
class ScalingReport:
    sizes: tuple[int, ...]  # docs per subject at each scale point
    seconds: tuple[tuple[float, ...], ...]  # per-repeat wall times
    mean_seconds: tuple[float, ...]
    ratios: tuple[float, ...]  # consecutive mean-time ratios
    loglog_slope: float


def run_scaling(
    sizes,
    repeats: int = 5,
    n_subjects: int = DEFAULT_SUBJECTS,
    doc_tokens: int = DEFAULT_DOC_TOKENS,
    profile_size: int = DEFAULT_PROFILE_SIZE,
    alpha: float = DEFAULT_ALPHA,
) -> ScalingReport:
    """Time the pipeline at each corpus size and fit a log-log growth slope."""
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) < 2 or any(s < 2 for s in sizes) or sorted(sizes) != list(sizes):
        raise ValueError("sizes must be >= 2 each, ascending, at least two of them")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    per_size = []
    for size in sizes:
        corpus = synthetic_corpus(n_subjects, size, doc_tokens)
        per_size.append(tuple(time_attribution(corpus, profile_size, alpha) for _ in range(repeats)))
    means = tuple(float(np.mean(t)) for t in per_size)
    ratios = tuple(means[i + 1] / means[i] for i in range(len(means) - 1))
    slope = float(np.polyfit(np.log(sizes), np.log(means), 1)[0])
    return ScalingReport(sizes, tuple(per_size), means, ratios, slope)
