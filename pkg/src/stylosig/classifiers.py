"""Subject classifiers over feature vectors: multinomial and Poisson naive Bayes.

Both train per-subject parameters from pooled in-vocabulary counts, score
in log space, and normalize with a max-shifted softmax.  Priors are
uniform.  Model files round-trip bit-exactly.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError, DegenerateInputWarning
from .features import FeatureModel, FeatureVector, Vocabulary

ALPHA_FLOOR = 1e-10
FORMAT_VERSION = 1


@dataclass(frozen=True)
class MnbModel:
    vocab: Vocabulary
    subject_labels: tuple[str, ...]
    alpha: float
    log_params: np.ndarray  # (S, m) log feature probabilities
    log_priors: np.ndarray  # (S,)

    @property
    def n_subjects(self) -> int:
        return len(self.subject_labels)


@dataclass(frozen=True)
class PnbModel:
    vocab: Vocabulary
    subject_labels: tuple[str, ...]
    alpha: float
    rates: np.ndarray  # (S, m) per-document expected counts
    log_rates: np.ndarray  # (S, m), -inf where the rate is zero
    rate_totals: np.ndarray  # (S,)
    log_priors: np.ndarray  # (S,)

    @property
    def n_subjects(self) -> int:
        return len(self.subject_labels)


def _count_matrix(train: Sequence[tuple[FeatureVector, int]], n_subjects: int, m: int):
    counts = np.zeros((n_subjects, m), dtype=np.float64)
    docs_per_subject = np.zeros(n_subjects, dtype=np.int64)
    for vector, subject in train:
        if not 0 <= subject < n_subjects:
            raise DataError(f"training vector labeled with unknown subject {subject}")
        docs_per_subject[subject] += 1
        for fid, c in vector.counts.items():
            counts[subject, fid] += c
    missing = [str(s) for s in range(n_subjects) if docs_per_subject[s] == 0]
    if missing:
        raise DataError("subjects without training vectors: " + ", ".join(missing))
    return counts, docs_per_subject


def mnb_train(
    train: Sequence[tuple[FeatureVector, int]],
    vocab: Vocabulary,
    alpha: float,
    subject_labels: Sequence[str],
) -> MnbModel:
    """Fit multinomial feature probabilities with additive smoothing.

    alpha=0 is replaced by a 1e-10 floor so that log probabilities stay
    finite; negative alpha is rejected.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    a = alpha if alpha > 0 else ALPHA_FLOOR
    labels = tuple(subject_labels)
    m = len(vocab)
    counts, _ = _count_matrix(train, len(labels), m)
    totals = counts.sum(axis=1)
    log_params = np.log(counts + a) - np.log(totals + a * m)[:, None]
    log_priors = np.full(len(labels), -np.log(len(labels)))
    return MnbModel(vocab, labels, alpha, log_params, log_priors)


def _softmax(log_scores: np.ndarray) -> np.ndarray:
    shifted = np.exp(log_scores - log_scores.max())
    return shifted / shifted.sum()


def _sparse_loglik(log_table: np.ndarray, vector: FeatureVector) -> np.ndarray:
    fids = np.fromiter(vector.counts.keys(), dtype=np.int64, count=len(vector.counts))
    cnts = np.fromiter(vector.counts.values(), dtype=np.float64, count=len(vector.counts))
    return log_table[:, fids] @ cnts


def mnb_posterior(model: MnbModel, vector: FeatureVector) -> np.ndarray:
    """Posterior over subjects; an empty vector falls back on the uniform."""
    if vector.total == 0:
        warnings.warn("empty feature vector, returning uniform posterior", DegenerateInputWarning)
        return np.full(model.n_subjects, 1.0 / model.n_subjects)
    return _softmax(model.log_priors + _sparse_loglik(model.log_params, vector))


def mnb_attribute(model: MnbModel, vector: FeatureVector) -> int:
    """Most probable subject id; posterior ties go to the lowest id."""
    return int(np.argmax(mnb_posterior(model, vector)))


def pnb_train(
    train: Sequence[tuple[FeatureVector, int]],
    vocab: Vocabulary,
    alpha: float,
    subject_labels: Sequence[str],
) -> PnbModel:
    """Fit one Poisson rate per (subject, feature): smoothed count / document count.

    alpha=0 is kept as-is here; a zero rate is a legal degenerate Poisson
    and its -inf log is handled at scoring time.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    labels = tuple(subject_labels)
    counts, docs_per_subject = _count_matrix(train, len(labels), len(vocab))
    rates = (counts + alpha) / docs_per_subject[:, None]
    with np.errstate(divide="ignore"):
        log_rates = np.log(rates)
    log_priors = np.full(len(labels), -np.log(len(labels)))
    return PnbModel(vocab, labels, alpha, rates, log_rates, rates.sum(axis=1), log_priors)


def pnb_posterior(model: PnbModel, vector: FeatureVector) -> np.ndarray:
    """Posterior over subjects under independent Poisson feature counts."""
    log_scores = model.log_priors - model.rate_totals
    if vector.counts:
        log_scores = log_scores + _sparse_loglik(model.log_rates, vector)
    if np.all(np.isneginf(log_scores)):
        warnings.warn(
            "every subject has zero likelihood, returning uniform posterior",
            DegenerateInputWarning,
        )
        return np.full(model.n_subjects, 1.0 / model.n_subjects)
    return _softmax(log_scores)


def posterior(model, vector: FeatureVector) -> np.ndarray:
    if isinstance(model, MnbModel):
        return mnb_posterior(model, vector)
    if isinstance(model, PnbModel):
        return pnb_posterior(model, vector)
    raise TypeError(f"not a classifier model: {type(model).__name__}")


# ---------------------------------------------------------------------------
# persistence

def save_model(model, path: str | Path) -> None:
    """Write a model as .npz; floats survive the round trip bit-exactly."""
    header = {
        "format_version": FORMAT_VERSION,
        "alpha": model.alpha,
        "feature_family": model.vocab.model.family,
        "feature_orders": list(model.vocab.model.orders),
        "feature_element": model.vocab.model.element,
        "profile_size": model.vocab.profile_size,
    }
    arrays = {
        "subject_labels": np.array(model.subject_labels, dtype=np.str_),
        "features": np.array(model.vocab.features, dtype=np.str_),
        "log_priors": model.log_priors,
    }
    if isinstance(model, MnbModel):
        header["kind"] = "mnb"
        arrays["log_params"] = model.log_params
    elif isinstance(model, PnbModel):
        header["kind"] = "pnb"
        arrays["rates"] = model.rates
        arrays["log_rates"] = model.log_rates
        arrays["rate_totals"] = model.rate_totals
    else:
        raise TypeError(f"not a classifier model: {type(model).__name__}")
    arrays["header"] = np.array(json.dumps(header))
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_model(path: str | Path):
    path = Path(path)
    try:
        with np.load(path, allow_pickle=False) as data:
            header = json.loads(str(data["header"]))
            if header.get("format_version") != FORMAT_VERSION:
                raise DataError(f"{path}: unsupported model format {header.get('format_version')!r}")
            fmodel = FeatureModel(
                header["feature_family"],
                tuple(header["feature_orders"]),
                header["feature_element"],
            )
            vocab = Vocabulary(fmodel, header["profile_size"], tuple(data["features"]))
            labels = tuple(data["subject_labels"])
            if header["kind"] == "mnb":
                return MnbModel(vocab, labels, header["alpha"], data["log_params"], data["log_priors"])
            if header["kind"] == "pnb":
                return PnbModel(
                    vocab,
                    labels,
                    header["alpha"],
                    data["rates"],
                    data["log_rates"],
                    data["rate_totals"],
                    data["log_priors"],
                )
            raise DataError(f"{path}: unknown model kind {header['kind']!r}")
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot load model from {path}: {exc}") from exc
