"""Experiment drivers: fit stylome models, run protocols, write result bundles.

A "bundle" is one directory per scored system (stylome, signature, fused,
and optional external routes) holding deterministic CSV curves plus a
summary.json.  Timings go to run.json only, so every CSV byte is
reproducible across runs.
"""

from __future__ import annotations

import time
from collections import Counter
from pathlib import Path
from typing import Sequence

import numpy as np

from . import classifiers, metrics
from .config import ExperimentConfig
from .corpus import (
    ChimericDataset,
    Corpus,
    Document,
    build_chimeric,
    keep_largest,
    load_text_corpus,
    rolling_folds,
    split_documents,
)
from .errors import DataError
from .features import FeatureModel, FeatureVector, Vocabulary, build_vocabulary, vectorize
from .fusion import fuse
from .possibility import to_possibility
from .signature import ScoreMatrix, load_score_matrix, load_svc, score_matrix_from_templates


def build_feature_model(config: ExperimentConfig) -> FeatureModel:
    if config.feature_family == "ngram":
        return FeatureModel("ngram", config.ngram_orders)
    return FeatureModel("sngram", (config.sngram_order,), config.sngram_element)


def fit_stylome(
    config: ExperimentConfig,
    train_docs: Sequence[Document],
    subject_of: dict[str, int],
    subject_labels: Sequence[str],
):
    """Extract features, freeze the vocabulary, and train the configured classifier."""
    fmodel = build_feature_model(config)
    counts = [fmodel.extract(doc) for doc in train_docs]
    vocab = build_vocabulary(counts, fmodel, config.profile_size)
    pairs = [(vectorize(c, vocab), subject_of[doc.doc_id]) for c, doc in zip(counts, train_docs)]
    train = classifiers.mnb_train if config.classifier == "mnb" else classifiers.pnb_train
    model = train(pairs, vocab, config.alpha, tuple(subject_labels))
    pooled: Counter = Counter()
    for c in counts:
        pooled.update(c)
    return model, pooled


def possibility_rows(model, vocab: Vocabulary, docs: Sequence[Document]) -> np.ndarray:
    """Fuzzified posteriors, one row per document."""
    fmodel = vocab.model
    rows = np.zeros((len(docs), model.n_subjects), dtype=np.float64)
    for i, doc in enumerate(docs):
        vector = vectorize(fmodel.extract(doc), vocab)
        rows[i] = to_possibility(classifiers.posterior(model, vector))
    return rows


def _decisions(scores: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    best = scores.argmax(axis=1)
    top = scores[np.arange(len(scores)), best]
    ties = (scores == top[:, None]).sum(axis=1) > 1
    return best, ties


def write_bundle(
    out_dir: Path,
    name: str,
    matrix: ScoreMatrix,
    truth: Sequence[int],
    config: ExperimentConfig,
    fold_accuracies: Sequence[float] | None = None,
) -> dict:
    """Score one system and write its curves; returns the summary dict."""
    out = Path(out_dir) / name
    out.mkdir(parents=True, exist_ok=True)
    truth = np.asarray(truth, dtype=np.int64)
    grid = metrics.default_grid(config.grid_points)

    decided, ties = _decisions(matrix.scores)
    correct = decided == truth
    acc = metrics.accuracy(correct=correct, confidence=config.confidence)

    claims = metrics.expand_claims(matrix, truth)
    fcurve = metrics.fscore_curve(claims, grid)
    rcurve = metrics.recall_curve(claims, grid)
    det = metrics.det_curve(claims, grid)
    cmc = metrics.cmc_curve(matrix, truth)
    hist = metrics.msh(claims, config.msh_bins)
    best_at = int(np.argmax(fcurve.ys))

    metrics.write_curve_csv(fcurve, out / "fscore.csv")
    metrics.write_curve_csv(rcurve, out / "recall.csv")
    metrics.write_det_csv(det, out / "det.csv")
    metrics.write_curve_csv(cmc, out / "cmc.csv")
    metrics.write_msh_csv(hist, out / "msh.csv")

    summary = {
        "system": name,
        "n_items": len(matrix.item_ids),
        "n_subjects": len(matrix.subject_labels),
        "n_claims": len(claims),
        "n_genuine": claims.n_genuine,
        "n_imposter": claims.n_imposter,
        "n_tied_decisions": int(ties.sum()),
        "accuracy": {
            "value": acc.accuracy,
            "ci_low": acc.ci_low,
            "ci_high": acc.ci_high,
            "method": acc.method,
            "n": acc.n,
            "confidence": acc.confidence,
        },
        "best_fscore": {"threshold": float(grid[best_at]), "value": float(fcurve.ys[best_at])},
        "det_area": det.area,
        "cmc_rank1": float(cmc.ys[0]),
        "msh_overlap": hist.overlap,
    }
    if fold_accuracies is not None:
        fold_acc = metrics.accuracy(folds=fold_accuracies, confidence=config.confidence)
        summary["fold_accuracy"] = {
            "per_fold": [float(a) for a in fold_accuracies],
            "mean": fold_acc.accuracy,
            "ci_low": fold_acc.ci_low,
            "ci_high": fold_acc.ci_high,
            "method": fold_acc.method,
            "n": fold_acc.n,
        }
    metrics.write_summary_json(summary, out / "summary.json")
    return summary


def _ttest_on_correctness(matrices: dict[str, ScoreMatrix], truth: np.ndarray, pairs) -> dict:
    out = {}
    for name_a, name_b in pairs:
        a = (_decisions(matrices[name_a].scores)[0] == truth).astype(np.float64)
        b = (_decisions(matrices[name_b].scores)[0] == truth).astype(np.float64)
        result = metrics.paired_ttest(a, b)
        out[f"{name_a}_vs_{name_b}"] = {
            "statistic": result.statistic,
            "pvalue": result.pvalue,
            "df": result.df,
            "degenerate": result.degenerate,
        }
    return out


# ---------------------------------------------------------------------------
# chimeric protocol

def _load_external(path: Path, kind: str, n_items: int, n_subjects: int, labels) -> ScoreMatrix:
    matrix = load_score_matrix(path)
    if matrix.scores.shape != (n_items, n_subjects):
        raise DataError(
            f"{path}: expected {n_items}x{n_subjects} scores, got "
            f"{matrix.scores.shape[0]}x{matrix.scores.shape[1]}"
        )
    scores = matrix.scores
    if kind == "probability":
        scores = np.vstack([to_possibility(row) for row in scores])
    return ScoreMatrix(matrix.item_ids, tuple(labels), scores)


def run_chimeric(config: ExperimentConfig) -> dict:
    """Full bimodal run: stylome route, signature route, and their fusion."""
    started = time.perf_counter()
    text = load_text_corpus(config.corpus_dir)
    if config.signature_dir is None:
        raise DataError("chimeric run needs signature_dir (raw capture files)")
    sig = load_svc(config.signature_dir)
    dataset = build_chimeric(text, sig, config.train_docs, config.test_docs)
    labels = dataset.subject_labels

    item_ids = tuple(
        f"s{subj.id:02d}i{j:02d}" for subj in dataset.subjects for j in range(config.test_docs)
    )
    truth = np.repeat(np.arange(dataset.n_subjects), config.test_docs)

    # stylome route
    train_docs = [doc for subj in dataset.subjects for doc in subj.train_docs]
    subject_of = {doc.doc_id: subj.id for subj in dataset.subjects for doc in subj.train_docs}
    model, _ = fit_stylome(config, train_docs, subject_of, labels)
    test_docs = [doc for subj in dataset.subjects for doc in subj.test_docs]
    stylome = ScoreMatrix(item_ids, labels, possibility_rows(model, model.vocab, test_docs))

    # signature route
    if config.signature_matrix is not None:
        signature = _load_external(config.signature_matrix, "fuzzy", len(item_ids), dataset.n_subjects, labels)
    else:
        probes = [
            (item_ids[i * config.test_docs + j], subj.test_sigs[j])
            for i, subj in enumerate(dataset.subjects)
            for j in range(config.test_docs)
        ]
        signature = score_matrix_from_templates(
            probes, [subj.train_sigs for subj in dataset.subjects], labels, config.delta_alpha
        )

    fused_name = f"{config.classifier}+signature"
    matrices = {
        config.classifier: stylome,
        "signature": signature,
        fused_name: ScoreMatrix(
            item_ids, labels, fuse(stylome.scores, signature.scores, config.fusion_operator)
        ),
    }
    ttest_pairs = [(fused_name, config.classifier), (fused_name, "signature")]
    if config.external_matrix is not None:
        external = _load_external(
            config.external_matrix, config.external_kind, len(item_ids), dataset.n_subjects, labels
        )
        matrices["external"] = external
        matrices["external+signature"] = ScoreMatrix(
            item_ids, labels, fuse(external.scores, signature.scores, config.fusion_operator)
        )
        ttest_pairs.append(("external+signature", "external"))

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summaries = {name: write_bundle(out_dir, name, m, truth, config) for name, m in matrices.items()}

    run_info = {
        "protocol": "chimeric",
        "systems": sorted(matrices),
        "counts": {
            "subjects": dataset.n_subjects,
            "test_items": dataset.n_test_items,
            "claims": dataset.n_claims,
            "genuine": dataset.n_genuine,
            "imposter": dataset.n_imposter,
        },
        "ttests": _ttest_on_correctness(matrices, truth, ttest_pairs),
        "elapsed_seconds": time.perf_counter() - started,
    }
    metrics.write_summary_json(run_info, out_dir / "run.json")
    return {"run": run_info, "summaries": summaries}


# ---------------------------------------------------------------------------
# rolling-window protocol

def run_rolling(config: ExperimentConfig) -> dict:
    """Per-fold attribution over a uniform corpus; curves pool all folds."""
    started = time.perf_counter()
    n_docs = config.train_window + config.test_window
    corpus = keep_largest(load_text_corpus(config.corpus_dir), n_docs)
    plan = rolling_folds(corpus, config.train_window, config.test_window)
    labels = corpus.subject_labels

    fold_accuracies = []
    pooled_rows = []
    pooled_ids = []
    pooled_truth = []
    for fold in plan.folds:
        train_docs, test_docs = split_documents(corpus, fold)
        subject_of = {doc.doc_id: doc.subject for doc in train_docs}
        model, _ = fit_stylome(config, train_docs, subject_of, labels)
        rows = possibility_rows(model, model.vocab, test_docs)
        truth = np.array([doc.subject for doc in test_docs], dtype=np.int64)
        decided, _ = _decisions(rows)
        fold_accuracies.append(float((decided == truth).mean()))
        pooled_rows.append(rows)
        pooled_ids.extend(f"f{fold.index:02d}/{doc.doc_id}" for doc in test_docs)
        pooled_truth.append(truth)

    matrix = ScoreMatrix(tuple(pooled_ids), labels, np.vstack(pooled_rows))
    truth = np.concatenate(pooled_truth)

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = write_bundle(out_dir, config.classifier, matrix, truth, config, fold_accuracies=fold_accuracies)

    run_info = {
        "protocol": "rolling",
        "systems": [config.classifier],
        "counts": {
            "subjects": len(labels),
            "folds": len(plan),
            "test_items": len(pooled_ids),
        },
        "elapsed_seconds": time.perf_counter() - started,
    }
    metrics.write_summary_json(run_info, out_dir / "run.json")
    return {"run": run_info, "summaries": {config.classifier: summary}}


# ---------------------------------------------------------------------------
# standalone fitting / scoring used by the CLI

def train_on_corpus(config: ExperimentConfig):
    """Fit the configured classifier on every document of a corpus."""
    corpus = load_text_corpus(config.corpus_dir)
    subject_of = {doc.doc_id: doc.subject for doc in corpus.documents}
    return fit_stylome(config, list(corpus.documents), subject_of, corpus.subject_labels)


def signature_matrix_from_dir(config: ExperimentConfig) -> ScoreMatrix:
    """Baseline scores of every held-out genuine sample against every writer."""
    sig = load_svc(config.signature_dir)
    need = config.train_docs + config.test_docs
    short = [str(w) for w in sig.writers if len(sig.by_writer[w]) < need]
    if short:
        raise DataError(
            f"writers with fewer than {need} genuine samples: " + ", ".join(short)
        )
    templates = [sig.by_writer[w][: config.train_docs] for w in sig.writers]
    probes = [
        (sample.item_id, sample)
        for w in sig.writers
        for sample in sig.by_writer[w][config.train_docs : need]
    ]
    labels = tuple(f"w{w}" for w in sig.writers)
    return score_matrix_from_templates(probes, templates, labels, config.delta_alpha)


def chimeric_manifest(config: ExperimentConfig) -> dict:
    """The pairing plan as plain data, for inspection or downstream tooling."""
    text = load_text_corpus(config.corpus_dir)
    sig = load_svc(config.signature_dir)
    dataset = build_chimeric(text, sig, config.train_docs, config.test_docs)
    return {
        "train_n": dataset.train_n,
        "test_n": dataset.test_n,
        "counts": {
            "subjects": dataset.n_subjects,
            "test_items": dataset.n_test_items,
            "claims": dataset.n_claims,
            "genuine": dataset.n_genuine,
            "imposter": dataset.n_imposter,
        },
        "subjects": [
            {
                "id": subj.id,
                "author": subj.author_label,
                "writer": subj.writer,
                "train_docs": [d.doc_id for d in subj.train_docs],
                "test_docs": [d.doc_id for d in subj.test_docs],
                "train_sigs": [s.item_id for s in subj.train_sigs],
                "test_sigs": [s.item_id for s in subj.test_sigs],
            }
            for subj in dataset.subjects
        ],
    }
